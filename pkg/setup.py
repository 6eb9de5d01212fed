from setuptools import find_packages, setup

setup(
    name='softlearn',
    version='1.0',
    packages=find_packages(exclude=['examples', 'examples.*']),
    include_package_data=True,
    package_data={'softlearn.datasets': ['manifests/*.json']},
    install_requires=[
        'click',
        'flask',
        'numpy',
        'scipy',
        'scikit-learn',
        'pandas',
        'joblib',
    ],
    entry_points="""
        [console_scripts]
        softlearn=cli.cli:cli
    """,
)
