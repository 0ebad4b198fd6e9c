from setuptools import find_packages, setup

base_dependencies = [
    "joblib >= 1.2.0",
    "matplotlib >= 3.5.1",
    "numpy >= 1.22.3",
    "pandas >= 1.5.0",
    "scipy >= 1.8.0",
    "tqdm >= 4.64.0"
    ]

setup(
    name='SemiGFPy',
    version='0.0.1',
    packages=find_packages(include=['semigfpy', 'semigfpy.*']),
    scripts=['sweep_launcher.py'],
    license='LICENSE.md',
    description='Ergodic rates of semi-grant-free NOMA uplinks',
    long_description='This package evaluates the closed-form ergodic rates of a semi-grant-free NOMA uplink and checks them against Monte Carlo simulation and nested numerical integration.',
    install_requires=base_dependencies,
    extras_require={
        'test': ["pytest >= 7.0"]
    }
)
