# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

"""
Exceptions raised by topigen. Each carries the exit code the command line
uses when it surfaces there.
"""


class TopigenError(Exception):
    exit_code = 1


class ConfigError(TopigenError):
    pass


class ParseError(TopigenError):
    """
    A malformed line in an input file.

    Parameters:
        file_name (str): The file the line came from.
        line_number (int): 1-based line number.
        reason (str): What is wrong with the line.
    """

    def __init__(self, file_name, line_number, reason):
        self.file_name = str(file_name)
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"{self.file_name}:{line_number}: {reason}")


class ClassificationConflictError(TopigenError):
    def __init__(self, node_ids):
        self.node_ids = sorted(node_ids)
        shown = ", ".join(self.node_ids[:5])
        more = f" (and {len(self.node_ids) - 5} more)" if len(self.node_ids) > 5 else ""
        super().__init__(f"nodes used both as article and as category: {shown}{more}")


class SchemaError(TopigenError):
    def __init__(self, file_name, line_number, reason):
        self.file_name = str(file_name)
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"{self.file_name}:{line_number}: {reason}")


class IntegrityError(TopigenError):
    pass


class ProfileMergeError(TopigenError):
    pass


class IndexFormatError(TopigenError):
    pass


class IndexVersionError(TopigenError):
    exit_code = 3


class TransportError(TopigenError):
    exit_code = 4


class ProtocolError(TopigenError):
    exit_code = 4
