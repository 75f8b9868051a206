#pragma once

namespace agl {

/// Fourth-order first-derivative stencils on a uniform line {lo..hi} with
/// spacing h; the window shifts near the ends. fetch(k) returns the value
/// type (double or Vec2).
template <typename Fetch>
auto line_d1_order4(Fetch&& fetch, int i, int lo, int hi, double h) {
    const double inv = 1.0 / (12.0 * h);
    if (i - 2 >= lo && i + 2 <= hi) {
        return (fetch(i - 2) - fetch(i - 1) * 8.0 + fetch(i + 1) * 8.0 - fetch(i + 2)) * inv;
    }
    if (i == lo) {
        return (fetch(lo) * -25.0 + fetch(lo + 1) * 48.0 - fetch(lo + 2) * 36.0 +
                fetch(lo + 3) * 16.0 - fetch(lo + 4) * 3.0) *
               inv;
    }
    if (i == lo + 1) {
        return (fetch(lo) * -3.0 - fetch(lo + 1) * 10.0 + fetch(lo + 2) * 18.0 -
                fetch(lo + 3) * 6.0 + fetch(lo + 4)) *
               inv;
    }
    if (i == hi) {
        return (fetch(hi) * 25.0 - fetch(hi - 1) * 48.0 + fetch(hi - 2) * 36.0 -
                fetch(hi - 3) * 16.0 + fetch(hi - 4) * 3.0) *
               inv;
    }
    // i == hi - 1
    return (fetch(hi) * 3.0 + fetch(hi - 1) * 10.0 - fetch(hi - 2) * 18.0 + fetch(hi - 3) * 6.0 -
            fetch(hi - 4)) *
           inv;
}

/// Third-order one-sided first derivative at the first node of {i..i+3}.
template <typename Fetch>
auto line_d1_onesided3(Fetch&& fetch, int i, double h) {
    return (fetch(i) * -11.0 + fetch(i + 1) * 18.0 - fetch(i + 2) * 9.0 + fetch(i + 3) * 2.0) *
           (1.0 / (6.0 * h));
}

/// Fourth-order centered second derivative (periodic directions where the
/// fetch wraps).
template <typename Fetch>
auto line_d2_order4_centered(Fetch&& fetch, int i, double h) {
    return (fetch(i - 2) * -1.0 + fetch(i - 1) * 16.0 - fetch(i) * 30.0 + fetch(i + 1) * 16.0 -
            fetch(i + 2)) *
           (1.0 / (12.0 * h * h));
}

/// Fourth-order centered first derivative (periodic directions).
template <typename Fetch>
auto line_d1_order4_centered(Fetch&& fetch, int i, double h) {
    return (fetch(i - 2) - fetch(i - 1) * 8.0 + fetch(i + 1) * 8.0 - fetch(i + 2)) *
           (1.0 / (12.0 * h));
}

}  // namespace agl
