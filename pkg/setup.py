# Always prefer setuptools over distutils
from setuptools import setup

setup(
    name='subradius',

    # Versions should comply with PEP440; keep in step with
    # subradius.__version__
    version='0.1',

    description='Lower and joint spectral radius bounds with adaptive '
                'polytope antinorms',
    long_description='Guaranteed bounds on the lower spectral radius and the '
                     'joint spectral radius of families of matrices sharing '
                     'the nonnegative orthant, by branch and bound over '
                     'the product semigroup with polytope (anti)norms refined '
                     'during the search.',

    license='AGPLv3',

    # See https://pypi.python.org/pypi?%3Aaction=list_classifiers
    classifiers=[
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: GNU Affero General Public License v3 (AGPLv3)',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],

    keywords='lower spectral radius joint spectral radius antinorm polytope',

    packages=['subradius'],

    python_requires='>=3.7',

    # run-time dependencies; docs and test tooling live in requirements.txt
    install_requires=['numpy', 'scipy', 'multiprocess', 'dill'],

    extras_require={
        'test': ['pytest'],
        'docs': ['Sphinx', 'sphinx-rtd-theme', 'sphinxcontrib-napoleon'],
    },

    entry_points={
        'console_scripts': ['subradius=subradius.cli:main_entry'],
    },
)
