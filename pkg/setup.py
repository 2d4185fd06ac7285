from __future__ import print_function
from setuptools import setup, find_packages
import sys


long_description = ''

if 'upload' in sys.argv or '--long-description' in sys.argv:
    with open('README.rst') as f:
        long_description = f.read()


def main():
    setup(
        name='haloproj',
        version='0.1',
        description=(
            "Nearest fixed points of quasi-nonexpansive operators by "
            "halfspace outer approximation."
        ),
        long_description=long_description,
        packages=find_packages(include=['haloproj', 'haloproj.*']),
        license='Apache 2.0',
        include_package_data=True,
        zip_safe=False,
        classifiers=[
            'Development Status :: 3 - Alpha',
            'Intended Audience :: Science/Research',
            'License :: OSI Approved :: Apache Software License',
            'Natural Language :: English',
            'Operating System :: OS Independent',
            'Programming Language :: Python :: 3',
            'Programming Language :: Python',
            'Topic :: Scientific/Engineering :: Mathematics',
        ],
        install_requires=[
            'click>=3.3',
            'numpy>=1.13',
            'traitlets>=4.3',
        ],
        extras_require={
            'test': [
                'pytest',
            ],
        },
        scripts=[
            'bin/haloproj',
            'bin/oracle-sweep',
        ],
    )


if __name__ == '__main__':
    main()
