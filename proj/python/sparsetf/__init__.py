# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The sparsetf Authors

from ._core import *  # noqa: F401,F403
from ._core import InvalidArgument, NumericFailure, ParseError

__version__ = "0.1.0"
