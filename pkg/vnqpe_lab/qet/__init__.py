# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

"""Quantum eigenvalue transformation on qubitized block-encodings.

Polynomials live on the unit circle z = exp(i theta), phase factors are found
by layer stripping, and circuits are evaluated densely or applied to state
vectors.
"""
