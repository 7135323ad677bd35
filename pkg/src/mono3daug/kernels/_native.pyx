# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pixel kernels.

Mirrors _fallback.py exactly; outputs must be bit-identical (the fallback is
the reference semantics, this is the fast path).
"""

import numpy as np

from libc.math cimport ceil, floor

ctypedef unsigned char u8
ctypedef long long i64


def rasterize_boxes(bounds, int height, int width):
    arr = np.ascontiguousarray(np.asarray(bounds, dtype=np.int64).reshape(-1, 4))
    out = np.zeros((height, width), dtype=np.uint8)
    cdef i64[:, ::1] bv = arr
    cdef u8[:, ::1] mv = out
    cdef Py_ssize_t i, x, y
    cdef i64 x0, y0, x1, y1
    for i in range(bv.shape[0]):
        x0 = bv[i, 0]; y0 = bv[i, 1]; x1 = bv[i, 2]; y1 = bv[i, 3]
        for y in range(y0, y1):
            for x in range(x0, x1):
                mv[y, x] = 1
    return out


def blend_mean_masked(a, b, mask):
    cdef const u8[:, :, ::1] av = np.ascontiguousarray(a)
    cdef const u8[:, :, ::1] bv = np.ascontiguousarray(b)
    cdef const u8[:, ::1] mv = np.ascontiguousarray(mask)
    out = np.empty_like(np.asarray(a))
    cdef u8[:, :, ::1] ov = out
    cdef Py_ssize_t y, x, c
    for y in range(av.shape[0]):
        for x in range(av.shape[1]):
            if mv[y, x]:
                for c in range(3):
                    ov[y, x, c] = <u8>((<int>av[y, x, c] + <int>bv[y, x, c] + 1) >> 1)
            else:
                for c in range(3):
                    ov[y, x, c] = av[y, x, c]
    return out


def blend_copy_masked(a, b, mask):
    cdef const u8[:, :, ::1] av = np.ascontiguousarray(a)
    cdef const u8[:, :, ::1] bv = np.ascontiguousarray(b)
    cdef const u8[:, ::1] mv = np.ascontiguousarray(mask)
    out = np.empty_like(np.asarray(a))
    cdef u8[:, :, ::1] ov = out
    cdef Py_ssize_t y, x, c
    for y in range(av.shape[0]):
        for x in range(av.shape[1]):
            if mv[y, x]:
                for c in range(3):
                    ov[y, x, c] = bv[y, x, c]
            else:
                for c in range(3):
                    ov[y, x, c] = av[y, x, c]
    return out


def motion_blur(img, int length, int dx, int dy):
    if length < 1:
        raise ValueError("blur length must be >= 1")
    src = np.ascontiguousarray(img)
    if length == 1:
        return src.copy()
    cdef const u8[:, :, ::1] sv = src
    out = np.empty_like(src)
    cdef u8[:, :, ::1] ov = out
    cdef Py_ssize_t height = sv.shape[0], width = sv.shape[1]
    cdef Py_ssize_t y, x, c, k
    cdef i64 acc0, acc1, acc2
    cdef i64 xx, yy, t
    cdef int half = length // 2
    for y in range(height):
        for x in range(width):
            acc0 = 0; acc1 = 0; acc2 = 0
            for k in range(length):
                t = k - half
                xx = x + t * dx
                if xx < 0:
                    xx = 0
                elif xx >= width:
                    xx = width - 1
                yy = y + t * dy
                if yy < 0:
                    yy = 0
                elif yy >= height:
                    yy = height - 1
                acc0 += sv[yy, xx, 0]
                acc1 += sv[yy, xx, 1]
                acc2 += sv[yy, xx, 2]
            ov[y, x, 0] = <u8>((2 * acc0 + length) // (2 * length))
            ov[y, x, 1] = <u8>((2 * acc1 + length) // (2 * length))
            ov[y, x, 2] = <u8>((2 * acc2 + length) // (2 * length))
    return out


def shift_channels(img, int dr, int dg, int db):
    cdef const u8[:, :, ::1] sv = np.ascontiguousarray(img)
    out = np.empty_like(np.asarray(img))
    cdef u8[:, :, ::1] ov = out
    cdef Py_ssize_t y, x
    cdef int off0 = dr, off1 = dg, off2 = db
    cdef int v
    for y in range(sv.shape[0]):
        for x in range(sv.shape[1]):
            v = sv[y, x, 0] + off0
            ov[y, x, 0] = <u8>(0 if v < 0 else (255 if v > 255 else v))
            v = sv[y, x, 1] + off1
            ov[y, x, 1] = <u8>(0 if v < 0 else (255 if v > 255 else v))
            v = sv[y, x, 2] + off2
            ov[y, x, 2] = <u8>(0 if v < 0 else (255 if v > 255 else v))
    return out


def scale_contrast(img, double alpha, means):
    cdef const u8[:, :, ::1] sv = np.ascontiguousarray(img)
    m = np.asarray(means, dtype=np.float64).reshape(3)
    cdef double m0 = m[0], m1 = m[1], m2 = m[2]
    out = np.empty_like(np.asarray(img))
    cdef u8[:, :, ::1] ov = out
    cdef Py_ssize_t y, x
    cdef double t
    for y in range(sv.shape[0]):
        for x in range(sv.shape[1]):
            t = m0 + alpha * (<double>sv[y, x, 0] - m0)
            t = floor(t + 0.5) if t >= 0.0 else ceil(t - 0.5)
            ov[y, x, 0] = <u8>(0.0 if t < 0.0 else (255.0 if t > 255.0 else t))
            t = m1 + alpha * (<double>sv[y, x, 1] - m1)
            t = floor(t + 0.5) if t >= 0.0 else ceil(t - 0.5)
            ov[y, x, 1] = <u8>(0.0 if t < 0.0 else (255.0 if t > 255.0 else t))
            t = m2 + alpha * (<double>sv[y, x, 2] - m2)
            t = floor(t + 0.5) if t >= 0.0 else ceil(t - 0.5)
            ov[y, x, 2] = <u8>(0.0 if t < 0.0 else (255.0 if t > 255.0 else t))
    return out
