from setuptools import setup, find_packages

# load the metadata from the meta.json file
with open('EquilibriumPricing/meta.json') as meta_file_stream:
    from json import load
    meta = load(meta_file_stream)

# load requirements from requirements.txt
with open('requirements.txt') as f:
    required = [line for line in f.read().splitlines() if line and not line.startswith('#')]

config = dict(packages=find_packages(include=['EquilibriumPricing*']),
              package_data={
                  'EquilibriumPricing': ['meta.json'],
                  'EquilibriumPricing.sweep': ['data/*.csv', 'templates/*.j2'],
                  'EquilibriumPricing.tasks': ['templates/*.yaml']
              },
              entry_points={
                  'console_scripts': ['eqp = EquilibriumPricing.cli:main']
              },
              install_requires=required)

config = config | meta


def main():
    setup(**config)


if __name__ == '__main__':
    main()
