"""Summary stats for the 26 equal-length UEA multivariate archive datasets.

Used by ``validate_meta`` / the ``validate`` CLI command to check that a
local copy of an archive dataset has the expected sizes, channel count,
length and class count. Short archive codes (e.g. "BM") resolve to the same
entries as full names.
"""

from __future__ import annotations

from .core import DatasetMeta

# code, name, train size, test size, dims, length, classes
_ROWS = (
    ("AWR", "ArticularyWordRecognition", 275, 300, 9, 144, 25),
    ("AF", "AtrialFibrillation", 15, 15, 2, 640, 3),
    ("BM", "BasicMotions", 40, 40, 6, 100, 4),
    ("CR", "Cricket", 108, 72, 6, 1197, 12),
    ("DDG", "DuckDuckGeese", 50, 50, 1345, 270, 5),
    ("EW", "EigenWorms", 128, 131, 6, 17984, 5),
    ("EP", "Epilepsy", 137, 138, 3, 206, 4),
    ("EC", "EthanolConcentration", 261, 263, 3, 1751, 4),
    ("ER", "ERing", 30, 270, 4, 65, 6),
    ("FD", "FaceDetection", 5890, 3524, 144, 62, 2),
    ("FM", "FingerMovements", 316, 100, 28, 50, 2),
    ("HMD", "HandMovementDirection", 160, 74, 10, 400, 4),
    ("HW", "Handwriting", 150, 850, 3, 152, 26),
    ("HB", "Heartbeat", 204, 205, 61, 405, 2),
    ("LIB", "Libras", 180, 180, 2, 45, 15),
    ("LSST", "LSST", 2459, 2466, 6, 36, 14),
    ("MI", "MotorImagery", 278, 100, 64, 3000, 2),
    ("NATO", "NATOPS", 180, 180, 24, 51, 6),
    ("PD", "PenDigits", 7494, 3498, 2, 8, 10),
    ("PEMS", "PEMS-SF", 267, 173, 963, 144, 7),
    ("PS", "PhonemeSpectra", 3315, 3353, 11, 217, 39),
    ("RS", "RacketSports", 151, 152, 6, 30, 4),
    ("SRS1", "SelfRegulationSCP1", 268, 293, 6, 896, 2),
    ("SRS2", "SelfRegulationSCP2", 200, 180, 7, 1152, 2),
    ("SWJ", "StandWalkJump", 12, 15, 4, 2500, 3),
    ("UW", "UWaveGestureLibrary", 120, 320, 3, 315, 8),
)

ARCHIVE_METADATA: dict[str, DatasetMeta] = {
    name: DatasetMeta(name, train, test, dims, length, classes)
    for _, name, train, test, dims, length, classes in _ROWS
}

_CODE_TO_NAME = {code: name for code, name, *_ in _ROWS}


def dataset_meta(name: str) -> DatasetMeta:
    """Look up archive metadata by full dataset name or short code."""
    if name in ARCHIVE_METADATA:
        return ARCHIVE_METADATA[name]
    if name in _CODE_TO_NAME:
        return ARCHIVE_METADATA[_CODE_TO_NAME[name]]
    known = ", ".join(sorted(ARCHIVE_METADATA))
    raise KeyError(f"unknown dataset {name!r}; known datasets: {known}")
