"""Schedule value objects.

A :class:`ScheduleMultiset` is a time-sharing pattern over independent
subgraphs; a :class:`CodedSchedule` assigns each user k disjoint slot sets,
one per codeword, and generalizes it. Both compare equal up to the order of
their slots.
"""
from collections import OrderedDict
from fractions import Fraction

from .exceptions import ScheduleFormatError
from .topology import format_rational


class ScheduleMultiset(object):
    """ A multiset of subgraphs scheduled one per time slot.

    Parameters
    ----------

    subgraphs : iterable of iterables of int
        The user set active in each of the t slots. Repeats are allowed.

    n_users : int
        Number of users K of the scheduled network.

    h : int, optional (default=1)
        Hop view for which the subgraphs were chosen.
    """

    def __init__(self, subgraphs, n_users, h=1):
        self.n_users = int(n_users)
        self.h = h
        slots = []
        for subgraph in subgraphs:
            users = tuple(sorted(set(int(u) for u in subgraph)))
            if not users:
                raise ScheduleFormatError("empty subgraph in schedule")
            if users[0] < 1 or users[-1] > self.n_users:
                raise ScheduleFormatError("subgraph %r has users outside "
                                          "1..%d" % (users, self.n_users))
            slots.append(users)
        if not slots:
            raise ScheduleFormatError("a schedule needs at least one slot")
        self.subgraphs = tuple(slots)

    @property
    def t(self):
        return len(self.subgraphs)

    def coverage(self):
        """Number of slots in which each user is active."""
        counts = OrderedDict((u, 0) for u in range(1, self.n_users + 1))
        for subgraph in self.subgraphs:
            for u in subgraph:
                counts[u] += 1
        return counts

    @property
    def d(self):
        return min(self.coverage().values())

    @property
    def value(self):
        """Normalized sum-rate d/t."""
        return Fraction(self.d, self.t)

    def distinct(self):
        """Distinct subgraphs with their multiplicities, sorted."""
        counts = OrderedDict()
        for subgraph in sorted(self.subgraphs):
            counts[subgraph] = counts.get(subgraph, 0) + 1
        return counts

    def to_coded(self):
        """The same time sharing as a coded schedule with k = d.

        User u sends a fresh codeword in each of its first d active slots
        and stays silent in the others.
        """
        d = self.d
        if d == 0:
            raise ScheduleFormatError("some user is never scheduled")
        assignments = dict((u, []) for u in range(1, self.n_users + 1))
        for slot, subgraph in enumerate(self.subgraphs, 1):
            for u in subgraph:
                if len(assignments[u]) < d:
                    assignments[u].append([slot])
        return CodedSchedule(self.t, d, assignments, self.n_users)

    def to_dict(self):
        doc = OrderedDict()
        doc['t'] = self.t
        doc['h'] = self.h
        doc['slots'] = [list(s) for s in self.subgraphs]
        doc['value'] = format_rational(self.value)
        return doc

    @classmethod
    def from_dict(cls, doc, n_users):
        if 'slots' not in doc:
            raise ScheduleFormatError("schedule document needs 'slots'")
        schedule = cls(doc['slots'], n_users, doc.get('h', 1))
        if 't' in doc and doc['t'] != schedule.t:
            raise ScheduleFormatError("declared t=%r but %d slots listed"
                                      % (doc['t'], schedule.t))
        return schedule

    def __eq__(self, other):
        return (isinstance(other, ScheduleMultiset)
                and self.n_users == other.n_users
                and sorted(self.subgraphs) == sorted(other.subgraphs))

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.n_users, tuple(sorted(self.subgraphs))))

    def __repr__(self):
        return 'ScheduleMultiset(t=%d, d=%d, slots=%s)' % (
            self.t, self.d, [list(s) for s in self.subgraphs])


class CodedSchedule(object):
    """ Slot assignment of a coded set schedule.

    Parameters
    ----------

    t : int
        Number of time slots.

    k : int
        Number of codewords per user.

    assignments : dict or sequence
        ``assignments[i]`` lists the k slot sets S_{i,1}..S_{i,k} of user i
        (1-based slots), pairwise disjoint and nonempty. An inactive user
        has an empty list. A sequence is read as users 1..K in order.

    n_users : int, optional
        Number of users; defaults to the size of ``assignments``.
    """

    def __init__(self, t, k, assignments, n_users=None):
        if int(t) < 1 or int(k) < 1:
            raise ScheduleFormatError("t and k must be positive, got t=%r, "
                                      "k=%r" % (t, k))
        self.t = int(t)
        self.k = int(k)
        if not isinstance(assignments, dict):
            assignments = dict(enumerate(assignments, 1))
        if n_users is None:
            n_users = max(assignments) if assignments else 0
        self.n_users = int(n_users)
        extra = set(assignments) - set(range(1, self.n_users + 1))
        if extra:
            raise ScheduleFormatError("assignments for unknown users %r"
                                      % sorted(extra))
        normalized = []
        for user in range(1, self.n_users + 1):
            codewords = assignments.get(user, [])
            if codewords and len(codewords) != self.k:
                raise ScheduleFormatError(
                    "user %d has %d codewords, expected %d"
                    % (user, len(codewords), self.k))
            used = set()
            sets = []
            for slots in codewords:
                slots = frozenset(int(s) for s in slots)
                if not slots:
                    raise ScheduleFormatError("user %d has an empty codeword"
                                              % user)
                if min(slots) < 1 or max(slots) > self.t:
                    raise ScheduleFormatError("user %d uses slots %r outside"
                                              " 1..%d" % (user, sorted(slots),
                                                          self.t))
                if used & slots:
                    raise ScheduleFormatError("user %d reuses slot %r for two"
                                              " codewords"
                                              % (user, min(used & slots)))
                used |= slots
                sets.append(slots)
            normalized.append(tuple(sets))
        self.assignments = tuple(normalized)

    def slots_of(self, user, codeword=None):
        """Slot set S_{user,codeword}, or all slots of ``user``."""
        sets = self.assignments[user - 1]
        if codeword is not None:
            return sets[codeword - 1] if sets else frozenset()
        return frozenset().union(*sets) if sets else frozenset()

    def is_active(self, user):
        return bool(self.assignments[user - 1])

    def active_users(self, slot):
        """Users transmitting in ``slot``."""
        return [u for u in range(1, self.n_users + 1)
                if slot in self.slots_of(u)]

    @property
    def value(self):
        """k/t when every user is served, 0 otherwise."""
        if not all(self.assignments):
            return Fraction(0)
        return Fraction(self.k, self.t)

    def has_empty_slot(self):
        return any(not self.active_users(s) for s in range(1, self.t + 1))

    def normal_form(self):
        """Slots renumbered in order of first use.

        Users are scanned in order, codewords of a user by their smallest
        renumbered slot.
        """
        order = {}
        for sets in self.assignments:
            for slots in sets:
                for s in sorted(slots):
                    if s not in order:
                        order[s] = len(order) + 1
        for s in range(1, self.t + 1):
            if s not in order:
                order[s] = len(order) + 1
        return tuple(tuple(sorted(tuple(sorted(order[s] for s in slots))
                                  for slots in sets))
                     for sets in self.assignments)

    def to_dict(self):
        doc = OrderedDict()
        doc['t'] = self.t
        doc['k'] = self.k
        doc['slots'] = [self.active_users(s) for s in range(1, self.t + 1)]
        doc['value'] = format_rational(self.value)
        doc['assignments'] = [
            OrderedDict([('user', u), ('codeword', j),
                         ('slots', sorted(slots))])
            for u, sets in enumerate(self.assignments, 1)
            for j, slots in enumerate(sets, 1)]
        return doc

    @classmethod
    def from_dict(cls, doc, n_users):
        """Read a coded schedule, or a plain slot list as a multiset."""
        if 'assignments' not in doc:
            return ScheduleMultiset.from_dict(doc, n_users).to_coded()
        try:
            t, k = doc['t'], doc['k']
            assignments = dict((u, []) for u in range(1, n_users + 1))
            entries = sorted(doc['assignments'],
                             key=lambda e: (e['user'], e['codeword']))
            for entry in entries:
                if entry['user'] not in assignments:
                    raise ScheduleFormatError("unknown user %r"
                                              % (entry['user'],))
                if entry['codeword'] != len(assignments[entry['user']]) + 1:
                    raise ScheduleFormatError(
                        "codewords of user %r are not numbered 1..k"
                        % (entry['user'],))
                assignments[entry['user']].append(entry['slots'])
        except (KeyError, TypeError):
            raise ScheduleFormatError("malformed coded schedule document")
        return cls(t, k, assignments, n_users)

    def __eq__(self, other):
        return (isinstance(other, CodedSchedule)
                and (self.t, self.k, self.n_users) ==
                (other.t, other.k, other.n_users)
                and self.normal_form() == other.normal_form())

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.t, self.k, self.normal_form()))

    def __repr__(self):
        return 'CodedSchedule(t=%d, k=%d, S=%s)' % (
            self.t, self.k,
            [[sorted(s) for s in sets] for sets in self.assignments])
