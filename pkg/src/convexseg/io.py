"""File formats used by the command line front end.

Images are 8-bit binary PGM (P5) or PPM (P6), scaled to [0, 1] on read.
Level-set functions go to a small raw format: the magic ``PHI0``, then M
and N as little-endian int32, 4 bytes of padding, then M*N little-endian
float64 values in row-major order.
"""

import re
import struct

import numpy as np

PHI_MAGIC = b"PHI0"
PHI_HEADER = struct.Struct("<4sii4x")

SCRIBBLE_OB = 255
SCRIBBLE_BG = 128


class FormatError(ValueError):
    """A file could not be parsed."""


def _pnm_header(data):
    # magic, width, height, maxval separated by whitespace; '#' starts a comment
    tokens = []
    pos = 0
    while len(tokens) < 4:
        m = re.compile(rb"\s*(#[^\n]*\n?)*\s*").match(data, pos)
        pos = m.end()
        m = re.compile(rb"\S+").match(data, pos)
        if m is None:
            raise FormatError("truncated PNM header")
        tokens.append(m.group())
        pos = m.end()
    # exactly one whitespace byte separates the header from the raster
    return tokens, pos + 1


def read_pnm(path):
    """Read a P5/P6 file as float64 in [0, 1]; gray gives (N, M), color (N, M, 3)."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens, start = _pnm_header(data)
    magic = tokens[0]
    if magic not in (b"P5", b"P6"):
        raise FormatError(f"{path}: unsupported magic {magic!r}; need P5 or P6")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise FormatError(f"{path}: bad header values") from exc
    if width <= 0 or height <= 0 or not 0 < maxval <= 255:
        raise FormatError(f"{path}: need positive size and 8-bit maxval, got {width}x{height} max {maxval}")
    channels = 1 if magic == b"P5" else 3
    count = width * height * channels
    raster = np.frombuffer(data, dtype=np.uint8, count=-1, offset=start)
    if raster.size < count:
        raise FormatError(f"{path}: raster has {raster.size} bytes, expected {count}")
    raster = raster[:count].astype(np.float64)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return raster.reshape(shape) / 255.0


def read_pgm_u8(path):
    """Raw 8-bit values of a P5 file, shape (N, M)."""
    img = read_pnm(path)
    if img.ndim != 2:
        raise FormatError(f"{path}: expected a grayscale P5 file")
    return np.rint(img * 255.0).astype(np.uint8)


def to_u8(img):
    """Map [0, 1] floats to uint8 by rounding, clipping out-of-range values."""
    return np.rint(np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0) * 255.0).astype(np.uint8)


def write_pnm(path, img):
    """Write a uint8 array, (N, M) as P5 or (N, M, 3) as P6."""
    arr = np.asarray(img)
    if arr.dtype != np.uint8:
        arr = to_u8(arr)
    if arr.ndim == 2:
        magic = b"P5"
    elif arr.ndim == 3 and arr.shape[2] == 3:
        magic = b"P6"
    else:
        raise ValueError(f"cannot write array of shape {arr.shape} as PNM")
    header = b"%s\n%d %d\n255\n" % (magic, arr.shape[1], arr.shape[0])
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(arr).tobytes())


def mask_to_u8(mask):
    """0/1 mask to PGM levels: object 0, background 255."""
    return np.where(np.asarray(mask) == 0, 0, 255).astype(np.uint8)


def read_mask(path):
    """PGM mask where dark pixels (< 128) are object; returns 0/1 uint8."""
    return np.where(read_pgm_u8(path) < 128, 0, 1).astype(np.uint8)


def write_phi(path, phi):
    phi = np.asarray(phi, dtype=np.float64)
    if phi.ndim != 2:
        raise ValueError("phi must be two-dimensional")
    N, M = phi.shape
    with open(path, "wb") as fh:
        fh.write(PHI_HEADER.pack(PHI_MAGIC, M, N))
        fh.write(np.ascontiguousarray(phi, dtype="<f8").tobytes())


def read_phi(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < PHI_HEADER.size:
        raise FormatError(f"{path}: shorter than the phi header")
    magic, M, N = PHI_HEADER.unpack_from(data)
    if magic != PHI_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if M <= 0 or N <= 0:
        raise FormatError(f"{path}: bad size {M}x{N}")
    body = data[PHI_HEADER.size:]
    if len(body) != 8 * M * N:
        raise FormatError(f"{path}: expected {8 * M * N} data bytes, found {len(body)}")
    return np.frombuffer(body, dtype="<f8").reshape(N, M).astype(np.float64)


def read_landmarks(path):
    """Landmarks file: one ``m n`` pair per line, 0-based column then row.

    Blank lines and ``#`` comments are ignored.  Returns a (K, 2) int array.
    """
    pts = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected two integers, got {line!r}")
            try:
                pts.append((int(parts[0]), int(parts[1])))
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: expected two integers, got {line!r}") from exc
    return np.array(pts, dtype=int).reshape(-1, 2)


def write_landmarks(path, landmarks):
    with open(path, "w") as fh:
        for x, y in np.asarray(landmarks, dtype=int).reshape(-1, 2):
            fh.write(f"{x} {y}\n")


def read_scribbles(path):
    """Scribble PGM to ``(ob, bg)`` boolean masks (255 object, 128 background)."""
    raw = read_pgm_u8(path)
    return raw == SCRIBBLE_OB, raw == SCRIBBLE_BG


def scribbles_to_u8(ob, bg):
    out = np.zeros(np.shape(ob), dtype=np.uint8)
    out[np.asarray(bg, dtype=bool)] = SCRIBBLE_BG
    out[np.asarray(ob, dtype=bool)] = SCRIBBLE_OB
    return out


def read_config(path):
    """Parse ``key = value`` lines into a dict of strings."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FormatError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if not key:
                raise FormatError(f"{path}:{lineno}: empty key")
            out[key.replace("-", "_")] = value
    return out


def contour_pixels(phi):
    """Pixels whose sign of phi differs from a 4-neighbour (both sides marked)."""
    neg = np.asarray(phi) <= 0
    edge = np.zeros(neg.shape, dtype=bool)
    dx = neg[:, 1:] != neg[:, :-1]
    dy = neg[1:, :] != neg[:-1, :]
    edge[:, 1:] |= dx
    edge[:, :-1] |= dx
    edge[1:, :] |= dy
    edge[:-1, :] |= dy
    return edge


def overlay(img, phi, color=(255, 0, 0)):
    """RGB uint8 copy of ``img`` with the zero-level contour painted in ``color``."""
    im = np.asarray(img, dtype=np.float64)
    if im.ndim == 3 and im.shape[2] == 1:
        im = im[..., 0]
    rgb = to_u8(im)
    if rgb.ndim == 2:
        rgb = np.repeat(rgb[..., None], 3, axis=2)
    rgb = rgb.copy()
    rgb[contour_pixels(phi)] = color
    return rgb
