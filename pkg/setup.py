#!/usr/bin/env python3
"""
Setup configuration for the CA3D UAV gateway deployment toolkit
"""

import os

from setuptools import find_packages, setup


def read_readme():
    readme_path = os.path.join(os.path.dirname(__file__), "README.md")
    if os.path.exists(readme_path):
        with open(readme_path, "r", encoding="utf-8") as f:
            return f.read()
    return "CA3D UAV gateway deployment toolkit"


def read_requirements():
    requirements_path = os.path.join(os.path.dirname(__file__), "requirements.txt")
    if os.path.exists(requirements_path):
        with open(requirements_path, "r", encoding="utf-8") as f:
            return [line.strip() for line in f if line.strip() and not line.startswith("#")]
    return []


setup(
    name="ca3d-deployment",
    version="1.0.0",
    description="Computing-accessibility-aware 3D UAV gateway deployment over a computing power network",
    long_description=read_readme(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests*", "examples*"]),
    package_data={
        "": ["*.md", "*.txt", "*.toml"],
    },
    include_package_data=True,
    install_requires=read_requirements(),
    extras_require={
        "dev": [
            "black>=23.0.0",
            "isort>=5.12.0",
            "mypy>=1.5.0",
        ],
    },
    python_requires=">=3.13",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.13",
        "Topic :: Scientific/Engineering",
        "Framework :: FastAPI",
        "Framework :: Pytest",
    ],
    keywords=["uav", "deployment", "edge-computing", "particle-swarm", "beam-search", "simulation"],
    entry_points={
        "console_scripts": [
            "simulate=api.cli:main_entry",
            "ca3d-api=api.main:main",
        ],
    },
    zip_safe=False,
)
