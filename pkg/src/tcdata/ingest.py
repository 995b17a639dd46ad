"""Reading and writing TC residents, events and exposures as CSV.

Residents files may start with a ``# epoch=YYYY-MM-DD`` line naming the
calendar date of day index 0.
"""

import csv
from pathlib import Path
from typing import Iterable, List, Optional, Union

from pydantic import ValidationError

from ..errors import DataError
from ..models import Event, EventLog, ExposureVector, Resident, ResidentPanel

RESIDENT_HEADER = ["id", "entry_day", "exit_day", "graduated", "age", "white", "lsi"]
EVENT_HEADER = ["sender", "receiver", "day"]
EXPOSURE_HEADER = ["id", "definition", "value"]
EPOCH_PREFIX = "# epoch="

PathLike = Union[str, Path]


def read_residents(path: PathLike) -> ResidentPanel:
    """Read a residents CSV into a panel, in file order.

    Raises:
        DataError: With the file row number on any schema violation
    """
    path = _existing(path)
    with open(path, newline="", encoding="utf-8") as f:
        lines = f.read().splitlines()

    epoch = None
    offset = 0
    if lines and lines[0].startswith(EPOCH_PREFIX):
        epoch = lines[0][len(EPOCH_PREFIX):].strip() or None
        offset = 1

    rows = csv.reader(lines[offset:])
    header = next(rows, None)
    if header != RESIDENT_HEADER:
        raise DataError(f"expected header {','.join(RESIDENT_HEADER)}", row=offset + 1, path=str(path))

    residents = []
    seen = set()
    for row_number, row in enumerate(rows, start=offset + 2):
        if not row:
            continue
        if len(row) != len(RESIDENT_HEADER):
            raise DataError(f"expected {len(RESIDENT_HEADER)} fields, got {len(row)}",
                            row=row_number, path=str(path))
        record = dict(zip(RESIDENT_HEADER, row))
        try:
            resident = Resident(
                id=record["id"],
                entry_day=int(record["entry_day"]),
                exit_day=int(record["exit_day"]),
                graduated=int(record["graduated"]),
                age=float(record["age"]),
                white=int(record["white"]),
                lsi=float(record["lsi"]),
            )
        except (ValueError, ValidationError) as e:
            raise DataError(_first_line(e), row=row_number, path=str(path))
        if resident.id in seen:
            raise DataError(f"duplicate resident id {resident.id}", row=row_number, path=str(path))
        seen.add(resident.id)
        residents.append(resident)
    return ResidentPanel(residents=residents, epoch=epoch)


def read_events(
    path: PathLike, panel: ResidentPanel, kind: str = "affirmations"
) -> EventLog:
    """Read an events CSV and check it against the resident table.

    Every event must reference known residents and fall on a day when both
    were in the unit (entry_day <= day < exit_day).

    Raises:
        DataError: With the file row number on any violation
    """
    path = _existing(path)
    events = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != EVENT_HEADER:
            raise DataError(f"expected header {','.join(EVENT_HEADER)}", row=1, path=str(path))
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                sender, receiver, day = row
                events.append(Event(sender=sender, receiver=receiver, day=int(day), row=row_number))
            except (ValueError, ValidationError):
                raise DataError(f"malformed event {row}", row=row_number, path=str(path))

    log = EventLog(events=events, kind=kind)
    validate_events(log, panel, path=str(path))
    return log


def validate_events(log: EventLog, panel: ResidentPanel, path: Optional[str] = None) -> None:
    """Check ids and contemporaneity of every event."""
    residents = {r.id: r for r in panel.residents}
    for position, event in enumerate(log.events):
        row = event.row if event.row is not None else position + 2
        for party in (event.sender, event.receiver):
            if party not in residents:
                raise DataError(f"unknown resident id {party}", row=row, path=path)
        if event.sender == event.receiver:
            raise DataError(f"self-addressed event for {event.sender}", row=row, path=path)
        for party in (event.sender, event.receiver):
            resident = residents[party]
            if not resident.entry_day <= event.day < resident.exit_day:
                raise DataError(
                    f"event on day {event.day} outside the stay of {party} "
                    f"[{resident.entry_day}, {resident.exit_day})",
                    row=row, path=path,
                )


def write_residents(panel: ResidentPanel, path: PathLike) -> None:
    """Write a panel in the format :func:`read_residents` accepts."""
    path = _prepare(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        if panel.epoch:
            f.write(f"{EPOCH_PREFIX}{panel.epoch}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(RESIDENT_HEADER)
        for r in panel.residents:
            writer.writerow([r.id, r.entry_day, r.exit_day, r.graduated,
                             repr(float(r.age)), r.white, repr(float(r.lsi))])


def write_events(log: EventLog, path: PathLike) -> None:
    """Write events in file order."""
    path = _prepare(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(EVENT_HEADER)
        for event in log.events:
            writer.writerow([event.sender, event.receiver, event.day])


def write_exposures(exposures: Iterable[ExposureVector], path: PathLike) -> None:
    """Long-format exposures; missing values are written empty."""
    path = _prepare(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(EXPOSURE_HEADER)
        for exposure in exposures:
            for resident_id, value in zip(exposure.ids, exposure.values):
                writer.writerow([resident_id, exposure.definition,
                                 "" if value is None else repr(float(value))])


def read_exposures(path: PathLike) -> List[ExposureVector]:
    """Read exposures written by :func:`write_exposures`, one vector per definition."""
    path = _existing(path)
    grouped = {}
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        if next(reader, None) != EXPOSURE_HEADER:
            raise DataError(f"expected header {','.join(EXPOSURE_HEADER)}", row=1, path=str(path))
        for row_number, row in enumerate(reader, start=2):
            try:
                resident_id, definition, value = row
                parsed = None if value == "" else float(value)
            except ValueError:
                raise DataError(f"malformed exposure {row}", row=row_number, path=str(path))
            ids, values = grouped.setdefault(definition, ([], []))
            ids.append(resident_id)
            values.append(parsed)
    return [ExposureVector(ids=ids, values=values, definition=definition)
            for definition, (ids, values) in grouped.items()]


def _first_line(error: Exception) -> str:
    if isinstance(error, ValidationError):
        details = error.errors()[0]
        field = ".".join(str(part) for part in details.get("loc", ()))
        return f"{field}: {details['msg']}" if field else details["msg"]
    return str(error)


def _existing(path: PathLike) -> Path:
    path = Path(path)
    if not path.is_file():
        raise DataError("file not found", path=str(path))
    return path


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path
