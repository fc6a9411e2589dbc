# setup.py
from setuptools import setup, find_packages

setup(
    name="nbg_toolkit",
    version="0.1.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    include_package_data=True,
    package_data={
        "nbg_toolkit": ["games/*.json", "games/*.txt"],
    },
    python_requires=">=3.10",
    install_requires=[
        "click",
        "networkx",
        "numpy",
        "pandas",
        "platformdirs",
        "scipy",
        "sympy",
    ],
    entry_points={
        "console_scripts": ["nbg=nbg_toolkit.cli:main"],
    },
)
