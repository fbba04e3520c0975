# Copyright 2024, NVIDIA CORPORATION & AFFILIATES. All rights reserved.
#
# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions
# are met:
#  * Redistributions of source code must retain the above copyright
#    notice, this list of conditions and the following disclaimer.
#  * Redistributions in binary form must reproduce the above copyright
#    notice, this list of conditions and the following disclaimer in the
#    documentation and/or other materials provided with the distribution.
#  * Neither the name of NVIDIA CORPORATION nor the names of its
#    contributors may be used to endorse or promote products derived
#    from this software without specific prior written permission.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS ``AS IS'' AND ANY
# EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR
# PURPOSE ARE DISCLAIMED.  IN NO EVENT SHALL THE COPYRIGHT OWNER OR
# CONTRIBUTORS BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL,
# EXEMPLARY, OR CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO,
# PROCUREMENT OF SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR
# PROFITS; OR BUSINESS INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY
# OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY, OR TORT
# (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

import json
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Type

from fd_match.constants import SIGNIFICANT_DIGITS


def load_json(filename: Path):
    with open(filename, encoding="utf-8") as f:
        return json.load(f)


def convert_option_name(name: str) -> str:
    return name.replace("_", "-")


def get_enum_names(enum: Type[Enum]) -> List[str]:
    names = []
    for e in enum:
        names.append(convert_option_name(e.name.lower()))
    return names


def get_enum_entry(name: str, enum: Type[Enum]) -> Optional[Enum]:
    for e in enum:
        if convert_option_name(e.name.lower()) == convert_option_name(name.lower()):
            return e
    return None


def format_float(value: float) -> str:
    """Full round-trip text for a double (17 significant digits)."""
    return format(float(value), f".{SIGNIFICANT_DIGITS}g")


def dumps_json(record: Dict[str, Any]) -> str:
    return json.dumps(record, indent=2) + "\n"


def dumps_csv_record(record: Dict[str, Any]) -> str:
    """Header line plus one row, scalar fields only."""
    keys = [k for k, v in record.items() if not isinstance(v, (list, dict))]
    values = []
    for k in keys:
        v = record[k]
        if isinstance(v, float):
            values.append(format_float(v))
        elif v is None:
            values.append("")
        else:
            values.append(str(v))
    return ",".join(keys) + "\n" + ",".join(values) + "\n"


def write_text(text: str, out: Optional[Path] = None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, mode="w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def sidecar_path(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)
