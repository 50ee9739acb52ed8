"""fracpk utils."""

import csv
import json
import logging
import os
import sys
import time
from collections.abc import Callable
from collections.abc import Iterable
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any
from typing import Optional
from typing import TypeVar

from rich import print

from .exceptions import FracPKError
from .settings import HOME_PATH
from .settings import WORKERS


T = TypeVar("T")
R = TypeVar("R")


def set_debug_logging(home_path: Path = HOME_PATH) -> None:
    """Creates a file with the debug log in the fracpk home folder.

    Args:
        home_path: path prefix to use for error logging, defaults to HOME_PATH.
    """
    error_logs_path = f"{home_path}/fracpk-cli/.error_logs/fracpk-debug.log"
    log_dir = os.path.dirname(error_logs_path)
    if not os.path.exists(log_dir):
        os.makedirs(log_dir)
    logging.basicConfig(filename=error_logs_path, level=logging.DEBUG)


def create_error_log(
    log: str, calling_function: str, home_path: Path = HOME_PATH
) -> None:
    """Creates a file with log of error in the fracpk home folder.

    Args:
        log: The content of the error log.
        calling_function: The function in which the error occurred. Used to give a more descriptive name to error log file.
        home_path: System home path
    """
    try:
        error_logs_path = f"{home_path}/fracpk-cli/.error_logs"
        if not os.path.exists(error_logs_path):
            os.makedirs(error_logs_path)
        filename = f"{calling_function}-error-{int(time.time())}.txt"
        with open(f"{error_logs_path}/{filename}", "w+") as f:
            f.write(log)
            print(f"Detailed error information saved to {error_logs_path}/{filename}")
            print(
                f"You can find the full debug log here {error_logs_path}/fracpk-debug.log"
            )
    except Exception as e:
        print(f"Error while attempting to write the log file: {e}")


def exit_with_error(
    error: FracPKError,
    traceback_text: str,
    calling_function: str,
    output_dir: Optional[Path] = None,
) -> None:
    """Report a fracpk error in machine-readable form and terminate.

    Args:
        error: The error that stopped the command.
        traceback_text: Formatted traceback stored in the error log.
        calling_function: Command name, used for the error log file name.
        output_dir: If given, error.json is also written there.
    """
    payload = error.to_dict()
    if output_dir is not None:
        try:
            write_json(output_dir / "error.json", payload)
        except OSError as e:
            logging.getLogger(__name__).warning("Could not write error.json: %s", e)
    print(f":x:\t{payload['error']}: {payload['message']}")
    sys.stdout.write(json.dumps(payload) + "\n")
    create_error_log(traceback_text, calling_function)
    sys.exit(int(error.exit_code))


def format_float(value: float) -> str:
    """Full double precision, identical across runs and platforms."""
    return repr(float(value))


def write_csv(
    path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> Path:
    """Write a CSV file, floats in full precision.

    Args:
        path: Target file, parent directories are created.
        header: Column names.
        rows: Row values; floats are written with format_float.

    Returns:
        The path written.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [format_float(v) if isinstance(v, float) else v for v in row]
            )
    return path


def write_json(path: Path, content: Any) -> Path:
    """Write pretty-printed JSON with sorted keys."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(content, indent=2, sort_keys=True, default=str))
        f.write("\n")
    return path


def run_parallel(
    fn: Callable[[T], R], items: Sequence[T], workers: int = WORKERS
) -> list[R]:
    """Map a picklable function over items, results in input order.

    Args:
        fn: Top-level function taking one item.
        items: Work items.
        workers: Process count; 1 runs inline.

    Returns:
        One result per item, in the order of items.
    """
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
