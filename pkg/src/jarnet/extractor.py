"""Call extraction: walk archive entries and emit caller/callee records.

Per class, records appear as call rows (methods in declaration order,
call sites in bytecode order) followed by the class-level usage rows
(first-encounter order, deduplicated, self-references dropped).
"""
from __future__ import annotations

import struct
import zipfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .classfile import ClassUnit, instructions, parse_class
from .errors import (
    ArchiveCorrupt,
    ArchiveNotFound,
    ClassFormatError,
    EntryDecodeError,
    MalformedConstantPool,
    UnknownOpcode,
)
from .names import CallRecord, ExtractStats, QualifiedName, RelationTable, UnitKind

OP_GETSTATIC = 0xB2
OP_PUTSTATIC = 0xB3
OP_GETFIELD = 0xB4
OP_PUTFIELD = 0xB5
OP_INVOKEVIRTUAL = 0xB6
OP_INVOKESPECIAL = 0xB7
OP_INVOKESTATIC = 0xB8
OP_INVOKEINTERFACE = 0xB9
OP_INVOKEDYNAMIC = 0xBA
OP_NEW = 0xBB
OP_ANEWARRAY = 0xBD
OP_CHECKCAST = 0xC0
OP_INSTANCEOF = 0xC1
OP_MULTIANEWARRAY = 0xC5
OP_LDC = 0x12
OP_LDC_W = 0x13

_FIELD_OPS = frozenset((OP_GETSTATIC, OP_PUTSTATIC, OP_GETFIELD, OP_PUTFIELD))
_TYPE_OPS = frozenset((OP_NEW, OP_ANEWARRAY, OP_CHECKCAST, OP_INSTANCEOF,
                       OP_MULTIANEWARRAY))
_INVOKE_OPS = frozenset((OP_INVOKEVIRTUAL, OP_INVOKESPECIAL, OP_INVOKESTATIC,
                         OP_INVOKEINTERFACE))

_TAG_CLASS = 7


def classify_callee(opcode: int, method_name: str,
                    target_is_interface: bool = False) -> UnitKind:
    """Map an invoke opcode to the callee kind.

    The interface flag mirrors whether the call site resolved an interface
    method ref; classification itself keys on the opcode (interface
    dispatch has its own opcode) plus the constructor name for special
    dispatch.
    """
    if opcode == OP_INVOKEVIRTUAL:
        return UnitKind.METHOD
    if opcode == OP_INVOKESPECIAL:
        return UnitKind.CONSTRUCTOR if method_name == "<init>" else UnitKind.METHOD
    if opcode == OP_INVOKESTATIC:
        return UnitKind.STATIC
    if opcode == OP_INVOKEINTERFACE:
        return UnitKind.INTERFACE
    raise UnknownOpcode(f"opcode 0x{opcode:02x} is not a classified call")


def _element_class(internal: str) -> str | None:
    """Element class of a (possibly array) type; None for primitive arrays."""
    if not internal.startswith("["):
        return internal
    stripped = internal.lstrip("[")
    if stripped.startswith("L") and stripped.endswith(";"):
        return stripped[1:-1]
    return None


def extract_calls(unit: ClassUnit) -> tuple[list[CallRecord], ExtractStats]:
    """All records for one class, plus the site/reference counters."""
    pool = unit.constants
    stats = ExtractStats(entries_scanned=1)
    records: list[CallRecord] = []
    class_refs: dict[str, None] = {}

    def note_class_ref(internal: str) -> None:
        element = _element_class(internal)
        if element is not None and element != unit.name:
            class_refs.setdefault(element, None)

    for method in unit.methods:
        if method.code is None:
            continue
        caller = QualifiedName.from_internal(unit.name, method.name, method.descriptor)
        try:
            for _, op, operands in instructions(method.code):
                if op in _INVOKE_OPS:
                    stats.call_sites += 1
                    index = struct.unpack(">H", operands[:2])[0]
                    try:
                        cls, name, desc, is_iface = pool.method_ref(index)
                    except MalformedConstantPool:
                        stats.unresolved_sites += 1
                        continue
                    kind = classify_callee(op, name, is_iface)
                    callee = QualifiedName.from_internal(cls, name, desc)
                    records.append(CallRecord(UnitKind.METHOD, caller, kind, callee))
                elif op == OP_INVOKEDYNAMIC:
                    # no resolvable target class: the pool entry names a
                    # bootstrap method, not a callee
                    stats.call_sites += 1
                    stats.unresolved_sites += 1
                elif op in _FIELD_OPS:
                    index = struct.unpack(">H", operands[:2])[0]
                    try:
                        cls, _, _ = pool.field_ref(index)
                    except MalformedConstantPool:
                        continue
                    note_class_ref(cls)
                elif op in _TYPE_OPS:
                    index = struct.unpack(">H", operands[:2])[0]
                    try:
                        note_class_ref(pool.class_name(index))
                    except MalformedConstantPool:
                        continue
                elif op == OP_LDC or op == OP_LDC_W:
                    index = operands[0] if op == OP_LDC else struct.unpack(">H", operands[:2])[0]
                    try:
                        if pool.tag(index) == _TAG_CLASS:
                            note_class_ref(pool.class_name(index))
                    except MalformedConstantPool:
                        continue
        except ClassFormatError:
            stats.bad_code_methods += 1

    caller_cls = QualifiedName.from_internal(unit.name)
    for internal in class_refs:
        records.append(CallRecord(UnitKind.CLASS, caller_cls, UnitKind.CLASS,
                                  QualifiedName.from_internal(internal)))
    stats.class_refs = len(class_refs)
    return records, stats


def open_archive(path, tolerant: bool = False, on_skip=None):
    """Yield (entry name, bytes) for each .class entry in archive order."""
    path = Path(path)
    if not path.exists():
        raise ArchiveNotFound(str(path))
    try:
        archive = zipfile.ZipFile(path)
    except (zipfile.BadZipFile, OSError) as exc:
        raise ArchiveCorrupt(f"{path}: {exc}") from exc
    with archive:
        for info in archive.infolist():
            if info.is_dir() or not info.filename.endswith(".class"):
                continue
            try:
                data = archive.read(info)
            except Exception as exc:  # CRC errors, truncated members
                if tolerant:
                    if on_skip is not None:
                        on_skip(info.filename, exc)
                    continue
                raise EntryDecodeError(info.filename, exc) from exc
            yield info.filename, data


def extract_archive(path, tolerant: bool = False, threads: int = 1) -> RelationTable:
    """Parse every class in the archive and build the full relation table."""
    stats = ExtractStats()

    def skipped(_name, _exc):
        stats.entries_skipped += 1

    def scan(item):
        name, data = item
        try:
            return extract_calls(parse_class(data, entry=name))
        except ClassFormatError as exc:
            if tolerant:
                return None
            raise EntryDecodeError(name, exc) from exc

    entries = open_archive(path, tolerant=tolerant, on_skip=skipped)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, entries))
    else:
        results = [scan(item) for item in entries]

    records: list[CallRecord] = []
    class_count = 0
    for result in results:
        if result is None:
            stats.entries_skipped += 1
            continue
        class_records, class_stats = result
        records.extend(class_records)
        stats.merge(class_stats)
        class_count += 1
    return RelationTable(records=records, source_archive=str(path),
                         class_count=class_count, stats=stats)
