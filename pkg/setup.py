from setuptools import setup

setup(
    name='centrodq',
    version='0.1.0',
    description='Differential quadrature with centrosymmetric matrix factorization',
    long_description='Differential quadrature weights, boundary-condition-modified beam, plate and '
                     'convection-diffusion operators, solved through half-size centrosymmetric blocks.',
    classifiers=[
        'Intended Audience :: Science/Research',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    license='MIT',
    packages=['centrodq', 'centrodq.tests'],
    python_requires='>=3.7',
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
        'jsonschema>=3.2.0',
        'genson>=1.2.1',
        'psutil>=5.7.0'
    ],
    entry_points={
        'console_scripts': ['centrodq=centrodq.cli:main'],
    },
)
