"""Build and install script for satatools."""
import os
import re
import setuptools


with open('satatools/version.py') as fid:
    try:
        __version__, = re.findall( '__version__ = "(.*)"', fid.read() )
    except:
        raise ValueError("could not find version number")


with open("README.rst", "r") as fh:
    long_description = fh.read()

packages = setuptools.find_packages(exclude=["tests"])

docs_require = ["sphinx"]
tests_require = ["pytest", "hypothesis", "scipy"]

setuptools.setup(
    name="sata-tools",
    version=__version__,
    entry_points={
          'console_scripts': [
              'satatools = satatools.__main__:main',
          ]
    },
    author="satatools contributors",
    description="Specialty-aware task assignment: greedy and exact solvers, "
    "a synthetic instance generator and a benchmark harness.",
    long_description=long_description,
    packages=packages,
    package_data={"satatools": ["default.yml"]},
    include_package_data=True,
    license="MIT",
    python_requires=">=3.8",
    install_requires=[
        "numpy",
        "pandas>=1.5",
        "tqdm",
        "coloredlogs",
        "pyyaml",
        "sqlalchemy>=1.4",
    ],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: MacOS :: MacOS X",
        "Operating System :: POSIX",
    ],
    extras_require={
        "docs": docs_require,
        "tests": tests_require,
        "dev": docs_require + tests_require,
    }
)
