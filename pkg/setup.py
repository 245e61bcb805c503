import sys
from setuptools import setup, find_packages


try:
    import numpy
except ImportError:
    print('numpy is required during installation')
    sys.exit(1)

try:
    import scipy
except ImportError:
    print('scipy is required during installation')
    sys.exit(1)

setup(name='localview-capacity',
      version='0.1.0',
      description='Normalized sum-capacity of interference networks '
                  'under local view',
      author='see AUTHORS.rst',
      license='MIT',
      packages=find_packages(),
      keywords=['interference networks', 'local view',
                'normalized sum-capacity', 'scheduling'],
      install_requires=['numpy>=1.10.4',
                        'scikit-learn>=0.19.1',
                        'scipy>=0.17.0',
                        'pandas>=0.18.1',
                        'networkx>=2.0'
                        ],
      extras_require={'tests': ['pytest>=3.6', 'hypothesis>=3.50']},
      entry_points={'console_scripts': ['localview=localview.cli:main']})
