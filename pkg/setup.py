from setuptools import find_packages, setup

setup(
    name="binloc",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "numpy>=1.24.0,<2.0.0",
        "scipy>=1.10.0",
        "pandas>=2.0.0",
        "pydantic>=2.1.0",
        "pyyaml>=6.0",
        "python-dotenv>=1.0.0",
        "tqdm>=4.65.0",
        "prometheus_client>=0.16.0",
        "dagster>=1.5.0",
    ],
    entry_points={
        "console_scripts": [
            "binloc=tools.binloc_cli:main",
        ],
    },
)
