from setuptools import setup, find_packages
import sys
import os
import re


def extract_version(version_file):
    version_match = re.search(r"^__version__ = ['\"]([^'\"]*)['\"]",
                              version_file, re.M)
    if version_match:
        return version_match.group(1)
    raise RuntimeError("Unable to find version string.")


if sys.version_info < (3, 6):
    sys.stderr.write('ERROR: You need Python 3.6 or later '
                     'to install the quaperture package.\n')
    exit(1)

packages = [package for package in find_packages()
            if package.startswith('quaperture')]

with open("README.md", "r") as fh:
    long_description = fh.read()

with open(os.path.join('quaperture', '__init__.py'), 'r') as init_file:
    init_file_content = init_file.read()

setup(name='quaperture',
      version=extract_version(init_file_content),
      description='Quantum and classical Fisher information of multi-aperture telescope receivers',
      long_description=long_description,
      long_description_content_type="text/markdown",

      package_dir={'quaperture': 'quaperture'},
      packages=packages,
      python_requires='>=3.6',
      install_requires=['sympy>=1.1.1', 'numpy>=1.17', 'scipy>=1.6', 'cached_property'],
      entry_points={
          'console_scripts': ['quaperture = quaperture.cli.main:main'],
      },
      test_suite="tests",
      tests_require=['pytest'],
      classifiers=[
          "Programming Language :: Python :: 3",
          "License :: OSI Approved :: MIT License",
          "Operating System :: OS Independent",
      ],
)
