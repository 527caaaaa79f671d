# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

import sys

from topigen.common_funcs import get_max_sizes
from topigen.profile_builder import load_profiles

"""
This script finds the profiles with the most topics and the second most topics in a
JSON-lines profile file, along with the number of profiles and their total topic count.

Usage: python profile_size_stats.py [profiles_path]
Parameter:
  profiles_path: The path to the JSON-lines file written by `topigen profile`.
Return: None

Example: python profile_size_stats.py out/profiles.jsonl
"""

# Check if the correct number of arguments were provided
if len(sys.argv) != 2:
    print(f"Usage: python {sys.argv[0]} profiles_path")
    print(f"Example: python {sys.argv[0]} out/profiles.jsonl")
    sys.exit(1)

# Parse the input arguments
profiles_path = sys.argv[1]

sizes = {profile.user_id: len(profile) for profile in load_profiles(profiles_path)}
results = get_max_sizes(sizes)
print("The number of profiles is: ", len(sizes))
print("The total number of topics is: ", sum(sizes.values()))
print("The max profile size is: ", results[0])
print("The list of users with the max profile size is: ", results[1])
print("The second max profile size is: ", results[2])
print("The list of users with the second max profile size is: ", results[3])
