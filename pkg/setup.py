from setuptools import setup, find_packages

setup(
    name="deformae",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "sympy>=1.13",
        "python-dotenv>=1.0.0",
    ],
    entry_points={
        "console_scripts": [
            "deformae=src.cli:main",
        ],
    },
)
