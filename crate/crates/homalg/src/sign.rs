//! The single source of Koszul and shift signs used across the workspace.

/// (-1)^e for any integer exponent.
pub fn parity(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign of swapping homogeneous elements of degrees `a` and `b`.
pub fn koszul(a: i64, b: i64) -> i64 {
    parity(a * b)
}

/// Sign in `∂f = Q_W f - (-1)^n f Q_V` attached to the precomposition term.
pub fn hom_differential(n: i64) -> i64 {
    -parity(n)
}

/// Sign carried by the differential of `V[p]`.
pub fn shift(p: i64) -> i64 {
    parity(p)
}

/// Sign in the graded Leibniz rule for a form of degree `k` acting after `d`.
pub fn leibniz(k: i64) -> i64 {
    parity(k)
}
