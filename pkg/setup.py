from setuptools import setup

setup(
    packages=["aperiodic_rs", "aperiodic_rs.verify"],
    package_data={"aperiodic_rs": ["fixtures/*.yaml"]},
)
