from setuptools import setup, find_packages

# read version
version_globals = {}
with open("pottsaf/version.py") as fp:
    exec(fp.read(), version_globals)
version = version_globals['__version__']

setup(
    name='pottsaf',
    packages=find_packages(exclude=['tests']),
    version=version,
    description='Peierls bounds, exact Gibbs measures, contours and Monte Carlo for the 3-state Potts '
                'antiferromagnet on plane quadrangulations',
    license='MIT',
    python_requires='>=3.8',
    install_requires=['future',
                      'six',
                      'configparser',
                      'unicodecsv',
                      'PyYAML',
                      'numpy>=1.17',
                      'mpmath',
                      'networkx>=2.0'
                      ],
    include_package_data=True,
    entry_points={
        'console_scripts': ['pottsaf=pottsaf.cli:main']
    }
)
