# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later
