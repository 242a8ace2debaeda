from setuptools import setup, find_packages

setup(
    name='bilevelknap',
    version='1.0.0',
    packages=find_packages(exclude=['tests']),
    install_requires=[
        'numpy==2.1.2',
        'pandas==2.2.3',
        'scipy==1.14.1',
    ],
    include_package_data=True,  # Incluye archivos de datos especificados en MANIFEST.in
    entry_points={
        'console_scripts': ['bilevelknap=bilevelknap.cli:main'],
    },
    description='Solvers para el problema bilevel de la mochila continua con objetivo del seguidor incierto.',
    long_description=open('README.md').read(),  # Lee el contenido de README.md como descripción larga
    long_description_content_type='text/markdown',
    license='MIT',
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
    ],
    python_requires='>=3.10',  # Versión mínima de Python requerida
)
