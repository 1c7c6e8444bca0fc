from setuptools import setup

setup(
    name="libbh",
    version="1.0a1",
    packages=[
        "libbh",
    ],
    package_dir={"": "python"},
    include_package_data=False,
)
