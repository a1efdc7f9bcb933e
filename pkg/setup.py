from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line.strip() for line in fh if line.strip() and not line.startswith("#")]

# 开发工具不作为运行依赖
DEV_TOOLS = ("pytest", "black", "isort", "flake8", "mypy")
requirements = [r for r in requirements if r and not r.startswith(DEV_TOOLS)]

setup(
    name="boostkit",
    version="0.1.0",
    description="Lorentz spinor algebra, moment tensors, Pauli reduction and lattice Dirac checks",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=["src", "src.*", "config"]),
    package_data={"config": ["scenarios/*.json", "data/*.csv"]},
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.9",
    install_requires=requirements,
    extras_require={"dev": ["pytest>=7.2.0", "black>=23.0.0", "isort>=5.12.0", "flake8>=6.0.0", "mypy>=1.0.0"]},
    entry_points={
        "console_scripts": [
            "boostkit=src.main:cli",
        ],
    },
)
