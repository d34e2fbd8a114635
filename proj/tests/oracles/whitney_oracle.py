"""Independent oracle for the frozen Whitney constants used in test_whitney.cpp.

Re-derives the base-point enumeration from its written definition and sums the
truncated series directly. The ray value uses the closed-form distance from a
point to a horizontal segment, not polyline sampling.
"""
import math
from fractions import Fraction


def stage_points(s):
    if s == 0:
        pts = [(j + 0.5, k + 0.5) for j in range(-4, 4) for k in range(-4, 4)]
        return sorted(pts, key=lambda p: (max(abs(p[0]), abs(p[1])), ang(p), math.hypot(*p)))
    out = []
    for level in range(0, s + 2):
        den = 2 ** level
        r = 4 * s
        rng = range(-r * den, r * den + 1)
        pts = []
        for a in rng:
            for b in rng:
                x, y = Fraction(a, den), Fraction(b, den)
                # minimal level of this dyadic point
                lvl = max(min_level(x), min_level(y))
                if lvl != level:
                    continue
                pts.append((float(x), float(y)))
        out.append(pts)
    return out


def min_level(q):
    d = q.denominator
    return d.bit_length() - 1


def ang(p):
    a = math.atan2(p[1], p[0])
    return a + 2 * math.pi if a < 0 else a


def scheme(n):
    pts = stage_points(0)
    seen = set(pts)
    s = 1
    while len(pts) < n:
        for level_pts in stage_points(s):
            fresh = [p for p in level_pts if p not in seen]
            fresh.sort(key=lambda p: (max(abs(p[0]), abs(p[1])), ang(p), math.hypot(*p)))
            for p in fresh:
                seen.add(p)
                pts.append(p)
        s += 1
    return pts[:n]


def m(q, p):
    return 1.0 / (1.0 + math.hypot(p[0] - q[0], p[1] - q[1]))


def mu_points(points, n):
    qs = scheme(n)
    total = 0.0
    for i, q in enumerate(qs, start=1):
        vals = [m(q, p) for p in points]
        total += (max(vals) - min(vals)) / 2.0 ** i
    return total


def mu_horizontal_segment(x0, x1, y, n):
    qs = scheme(n)
    total = 0.0
    for i, q in enumerate(qs, start=1):
        if x0 <= q[0] <= x1:
            dmin = abs(q[1] - y)
        else:
            dmin = min(math.hypot(q[0] - x0, q[1] - y), math.hypot(q[0] - x1, q[1] - y))
        dmax = max(math.hypot(q[0] - x0, q[1] - y), math.hypot(q[0] - x1, q[1] - y))
        total += (1.0 / (1.0 + dmin) - 1.0 / (1.0 + dmax)) / 2.0 ** i
    return total


if __name__ == "__main__":
    print("first 8 points:", scheme(8))
    print("scheme(70)[64:70]:", scheme(70)[64:70])
    print("mu_two_point_N20 = %.17g" % mu_points([(0.0, 0.0), (1.0, 0.0)], 20))
    print("tau_ray_L4_N20 = %.17g" % mu_horizontal_segment(0.0, 4.0, 0.0, 20))
