import glob
import os

from setuptools import setup


# Other Variables
BASE_DIR = os.path.dirname(__file__)
DESCRIPTION = __doc__
LONG_DESCRIPTION = open("README.md", "r", encoding="utf-8").read()
LICENSE = '2-Clause "Simplified" BSD License'
DATA_FILES = glob.glob(os.path.join(BASE_DIR, 'base_data', '*.json'))


# Setup tools
setup(
    name='pysdmac',
    version='1.0.0',
    description='Achievable rate regions and block-Markov simulation '
    'for state-dependent multiple access channels with feedback.',
    long_description=LONG_DESCRIPTION,
    long_description_content_type='text/markdown',
    packages=['pysdmac.api', 'pysdmac.tests'],
    entry_points={
        'console_scripts': [
            'pysdmac = pysdmac.api.__main__:main'
        ]
    },
    test_suite='pysdmac.tests',
    python_requires='>=3.8',
    install_requires=[
        'numpy',
        'scipy',
        'chardet',
        'docopt',
        'lxml',
    ],
    extras_require={
        'test': ['pytest'],
    },
    data_files=[('pysdmac_basedata', DATA_FILES)],
    license=LICENSE,
)
