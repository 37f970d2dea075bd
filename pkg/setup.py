from setuptools import find_packages, setup

with open("README.md", "r") as f:
    readme = f.read()

setup(
    name = "Quench",
    version = "0.1.0",
    description = "Transition amplitudes of a quantum particle after its trap suddenly starts to move",
    long_description = readme,
    author = "Jeremy Montera",
    author_email = "wittkopp.jeremy@gmail.com",
    package_dir = {"": "src"},
    packages = find_packages(where = "src", exclude = ("tests", "docs")),
    install_requires = ["numpy", "scipy", "mpmath"],
    entry_points = {"console_scripts": ["quench = quench.cli.main:main"]},
)
