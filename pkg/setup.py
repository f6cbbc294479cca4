"""
Setup script for cartan_vmrt
"""
import os

from setuptools import find_packages, setup

import cartan_vmrt


# Utility function to read the README file.
# Used for the long_description.
def read(filename):
    """
    Read the contents of a file

    :param filename: the file name relative to this file
    :return: The contents of the file
    """
    return open(os.path.join(os.path.dirname(__file__), filename)).read()


setup(
    name='cartan_vmrt',
    version=cartan_vmrt.__version__,

    description='Root combinatorics of compact Hermitian symmetric spaces and the rigidity of their admissible pairs',
    long_description=read('README.rst'),
    keywords='dynkin root-system hermitian-symmetric vmrt rigidity',
    license='GPLv3',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Natural Language :: English',
        'Operating System :: MacOS :: MacOS X',
        'Operating System :: POSIX',
        'Operating System :: Unix',
        'Programming Language :: Python :: 3 :: Only',
        'Programming Language :: Python :: 3.5',
        'Programming Language :: Python :: 3.6',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],

    packages=find_packages(exclude=['tests', 'tests.*']),
    package_data={
        'cartan_vmrt': ['data/*.yaml'],
    },
    include_package_data=True,
    entry_points={
        'console_scripts': [
            'cartan-vmrt = cartan_vmrt.cli:main',
        ],
    },

    python_requires='>= 3.5',
    install_requires=[
        'networkx >= 2.0',
        'pyyaml',
        'sympy >= 1.1',
    ],
    extras_require={
        'tests': [
            'hypothesis',
            'pytest',
        ],
    },

    test_suite='tests',

    author='Sander Steffann',
    author_email='sander@steffann.nl',

    zip_safe=False,
)
