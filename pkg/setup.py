#!/usr/bin/env python3
# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from setuptools import find_packages, setup

setup(
    name='vnqpe-lab',
    version='0.1',
    description='Phase estimation with a continuous-variable pointer, simulated and costed',
    author='vnqpe-lab Authors',
    license='GPLv3',
    packages=find_packages(exclude=['*.tests']),
    entry_points={
        'console_scripts': [
            'vnqpe-lab = vnqpe_lab.main:main',
        ],
    },
)
