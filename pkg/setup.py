from setuptools import setup, find_packages

exec(open('hdeform/__version__.py').read())
setup(
    name='hdeform',
    version=__version__,
    packages=find_packages(exclude=["tests"]),
    include_package_data=True,
    package_data={'hdeform': ['resources/*.yaml', 'resources/fixtures/*.json']},
    install_requires=['pyyaml', 'numpy', 'sympy>=1.12'],
    extras_require={'test': ['pytest', 'hypothesis']},
    entry_points={'console_scripts': ['hdeform = hdeform.run_hdeform:main']},
    description='Exact deformation theory of A-infinity algebras with infinity inner products.',
)
