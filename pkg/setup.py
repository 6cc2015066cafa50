from setuptools import setup, find_packages

with open('README.md', 'r') as f:
    readme = f.read()
version = '0.1.0'
setup(
    name='mmst',
    packages=find_packages(exclude=["examples", "tests"]),
    version=version,
    license='MIT',
    description='Minimum spanning trees under matroidal degree constraints by iterative rounding',
    keywords=['spanning-tree', 'matroid', 'iterative-rounding', 'linear-programming'],
    long_description=readme,
    long_description_content_type="text/markdown",
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
    ],
    extras_require={
        "test": [
            'hypothesis',
        ]
    },
    include_package_data=True,
    test_suite='tests',
    install_requires=[
        'numpy',
        'networkx',
        'sympy'
    ],
    python_requires='>=3.7',
    entry_points={
        'console_scripts': [
            'mmst-solve = mmst.mmst_cl.solve:main',
            'mmst-verify = mmst.mmst_cl.verify:main',
            'mmst-gen = mmst.mmst_cl.generate:main'
        ],
    }
)
