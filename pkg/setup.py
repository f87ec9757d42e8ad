"""

    markovdsep.setup
    ~~~~~~~~~~~~~~~~

    setuptools script

    This file is part of markovdsep, d-separation and causal compatibility
    for string diagram causal models.

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
"""

import os

from setuptools import setup, find_packages

long_description = open('README.md').read()

main_ns = {}
ver_path = os.path.join('markovdsep', 'version.py')
with open(ver_path) as ver_file:
    exec(ver_file.read(), main_ns)

setup(
    name="markovdsep",
    version=main_ns['__version__'].strip('v'),  # noqa
    description="markovdsep - d-separation and causal compatibility for string diagram causal models",
    long_description_content_type='text/markdown',
    long_description=long_description,
    classifiers=['Intended Audience :: Science/Research',
                 "Development Status :: 3 - Alpha",
                 'Programming Language :: Python :: 3',
                 'Topic :: Scientific/Engineering :: Mathematics'],
    keywords="causal inference d-separation markov category string diagram",
    license="GPL-3.0",
    platforms="any",
    python_requires=">=3.8",
    packages=find_packages('.', exclude=['tests*', 'examples*']),
    include_package_data=True,
    zip_safe=False,
    install_requires=['numpy', 'scipy', 'networkx', 'json_tricks'],
    extras_require={'test': ['pytest', 'hypothesis']},
    package_data={"markovdsep": [os.path.join("models", "*.json")]},
    entry_points=dict(
        console_scripts=['markov-dsep = markovdsep:main'],
    ),
)
