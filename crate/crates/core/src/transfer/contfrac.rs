//! The continued fraction `C_k = 1 − 1/(4C_{k−1})`, `C_0 = 1`.

use num_rational::Ratio;

/// Closed form `(k+2)/(2k+2)`.
pub fn continued_fraction_c(k: u64) -> Ratio<i64> {
    Ratio::new(k as i64 + 2, 2 * k as i64 + 2)
}

/// Iterates `C_k = 1 − 1/(4C_{k−1})` from `C_0 = 1`.
pub fn continued_fraction_c_recurrence(k: u64) -> Ratio<i64> {
    let one = Ratio::from_integer(1);
    let four = Ratio::from_integer(4);
    (0..k).fold(one, |c, _| one - (four * c).recip())
}

/// Numerator and denominator of `C_k` from the composed Möbius map
/// `x ↦ (4x − 1)/(4x)` applied `k` times to `C_0 = 1`, kept in lowest terms.
pub fn continued_fraction_c_convergent(k: u64) -> (i128, i128) {
    let (mut f, mut g) = (1i128, 1i128);
    for _ in 0..k {
        (f, g) = (4 * f - g, 4 * f);
        let c = gcd(f, g);
        f /= c;
        g /= c;
    }
    (f, g)
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}
