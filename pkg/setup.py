from setuptools import setup, find_packages

setup(
    name="clstrata",
    version="0.1.0",
    packages=find_packages(exclude=("tests", "benchmarks")),
    package_data={"clstrata": ["data/*.ribbon"]},
    install_requires=[
        "numpy>=1.19.0",
        "pandas>=1.2.0",
        "networkx>=2.5",
    ],
    extras_require={
        "dev": [
            "pytest>=6.0.0",
            "pytest-cov>=2.11.0",
            "hypothesis>=6.0.0",
            "flake8>=3.8.0",
            "mypy>=0.790",
        ],
    },
    entry_points={
        "console_scripts": [
            "clstrata=clstrata.cli:main",
        ],
    },
    python_requires=">=3.8",
    author="",
    author_email="",
    description="Cut-locus structures on graphs as twisted ribbon structures",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    url="",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: BSD License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
