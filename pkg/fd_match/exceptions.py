# Copyright 2024, NVIDIA CORPORATION & AFFILIATES. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


class FdMatchException(Exception):
    """
    A custom exception specific to fd-match
    """

    exit_code = 1


class ValidationError(FdMatchException):
    """
    Invalid input: a malformed instance, a bad parameter or a size cap
    """

    exit_code = 3


class NonPositiveSpeed(ValidationError):
    pass


class NonPositiveJob(ValidationError):
    pass


class NonFiniteValue(ValidationError):
    pass


class EmptyMachines(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class TooLarge(ValidationError):
    pass


class ZeroTrials(ValidationError):
    pass


class DegenerateInstance(ValidationError):
    pass


class InstanceFileError(ValidationError):
    pass


class NumericError(FdMatchException):
    """
    A numeric routine was asked for something outside its domain or did
    not converge
    """

    exit_code = 4


class DomainError(NumericError):
    pass


class NoMaximumInRange(NumericError):
    pass


class NonTermination(NumericError):
    pass


class NumericOverflow(NumericError):
    pass
