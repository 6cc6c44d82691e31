import setuptools

def get_readme():
    with open("README.md", "r") as fh:
        long_description = fh.read()
    return long_description

def get_requirements():
    requirements = []
    with open('requirements.txt') as f:
        for line in f:
            line = line.split('#')[0].strip()
            if line:
                requirements.append(line)
    return requirements

def get_version():
    with open("src/__init__.py") as f:
        for line in f:
            if line.startswith("__version__"):
                return line.split("=")[1].strip().strip('"')
    raise RuntimeError("no __version__ in src/__init__.py")

setuptools.setup(
    name="itest-runner",
    version=get_version(),
    description="Find, assemble and run inline tests declared next to the code they test",
    long_description=get_readme(),
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
    install_requires=get_requirements(),
    python_requires='>=3.9',
    entry_points={
        "console_scripts": ["itest-runner = src.cli:main"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
