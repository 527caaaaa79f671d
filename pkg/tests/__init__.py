# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.
