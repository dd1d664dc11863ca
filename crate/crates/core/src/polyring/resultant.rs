use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntLaurentPoly, PolyError};

/// Dense integer polynomial, lowest degree first, no trailing zeros.
type Dense = Vec<BigInt>;

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn degree(p: &Dense) -> usize {
    p.len() - 1
}

fn content(p: &Dense) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn div_scalar(p: &Dense, c: &BigInt) -> Dense {
    p.iter().map(|x| x / c).collect()
}

/// Pseudo-remainder of `a` by `b`: `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem(a: &Dense, b: &Dense) -> Dense {
    let db = degree(b);
    let lb = &b[db];
    let mut r = a.clone();
    let mut e = degree(a) as i64 - db as i64 + 1;
    while !r.is_empty() && r.len() > db {
        let dr = degree(&r);
        let lr = r[dr].clone();
        let k = dr - db;
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &lr * bj;
        }
        r = trim(r);
        e -= 1;
    }
    if e > 0 {
        let f = num_traits::pow(lb.clone(), e as usize);
        for x in r.iter_mut() {
            *x *= &f;
        }
    }
    r
}

/// Exact resultant of two ordinary integer polynomials by the subresultant
/// remainder sequence.
fn dense_resultant(a: Dense, b: Dense) -> BigInt {
    let (mut a, mut b) = (trim(a), trim(b));
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let ca = content(&a);
    let cb = content(&b);
    a = div_scalar(&a, &ca);
    b = div_scalar(&b, &cb);
    let mut sign = BigInt::one();
    let t = num_traits::pow(ca, degree(&b)) * num_traits::pow(cb, degree(&a));
    if degree(&a) < degree(&b) {
        if degree(&a) % 2 == 1 && degree(&b) % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        if degree(&b) == 0 {
            let da = degree(&a);
            if da == 0 {
                return sign * t;
            }
            let hh = num_traits::pow(b[0].clone(), da) / num_traits::pow(h, da - 1);
            return sign * t * hh;
        }
        let delta = degree(&a) - degree(&b);
        if degree(&a) % 2 == 1 && degree(&b) % 2 == 1 {
            sign = -sign;
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        a = b;
        let div = &g * num_traits::pow(h.clone(), delta);
        b = div_scalar(&r, &div);
        g = a[degree(&a)].clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
    }
}

fn ordinary(p: &IntLaurentPoly) -> Dense {
    p.dense()
}

/// Resultant of the ordinary polynomials obtained by shifting out the
/// lowest power of `t` from each argument.
pub fn resultant(a: &IntLaurentPoly, b: &IntLaurentPoly) -> BigInt {
    dense_resultant(ordinary(a), ordinary(b))
}

/// `|prod_{j=1}^{n-1} p(zeta_n^j)|` as an exact integer, computed as
/// `|Res(p, 1 + t + ... + t^(n-1))|`. Zero when `p` vanishes at a
/// nontrivial `n`-th root of unity.
pub fn resultant_with_cyclotomic_family(p: &IntLaurentPoly, n: u32) -> Result<BigUint, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if n < 2 {
        return Ok(BigUint::one());
    }
    let family: Dense = vec![BigInt::one(); n as usize];
    let r = dense_resultant(ordinary(p), family);
    Ok(match r.sign() {
        Sign::NoSign => BigUint::zero(),
        _ => r.abs().to_biguint().expect("absolute value is nonnegative"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(lowest: i64, c: &[i64]) -> IntLaurentPoly {
        IntLaurentPoly::from_dense(lowest, c)
    }

    #[test]
    fn trefoil_family() {
        let p = int(0, &[1, -1, 1]);
        assert_eq!(
            resultant_with_cyclotomic_family(&p, 2).unwrap(),
            3u32.into()
        );
        assert_eq!(
            resultant_with_cyclotomic_family(&p, 3).unwrap(),
            4u32.into()
        );
        assert_eq!(
            resultant_with_cyclotomic_family(&p, 6).unwrap(),
            0u32.into()
        );
    }

    #[test]
    fn laurent_shift_is_ignored() {
        let p = int(-1, &[1, -1, 1]);
        assert_eq!(
            resultant_with_cyclotomic_family(&p, 4).unwrap(),
            3u32.into()
        );
    }

    #[test]
    fn zero_rejected() {
        assert_eq!(
            resultant_with_cyclotomic_family(&IntLaurentPoly::zero(), 3),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn small_resultants() {
        // Res(t - 2, t - 3) = -1 with the convention Res = lc^.. prod (a_i - b_j)
        assert_eq!(
            resultant(&int(0, &[-2, 1]), &int(0, &[-3, 1])).abs(),
            1.into()
        );
        // Res(t^2 + 1, t^2 - 1) = 4
        assert_eq!(
            resultant(&int(0, &[1, 0, 1]), &int(0, &[-1, 0, 1])).abs(),
            4.into()
        );
        // Res(2t + 1, t^3) = 1 * (-1/2)^3 * 2^3 -> |.| = 1
        assert_eq!(
            resultant(&int(0, &[1, 2]), &int(0, &[0, 0, 0, 1])).abs(),
            1.into()
        );
        // Res(6t + 4, 3t^2 + 3) = 6^2 * ((-2/3)^2 + 1) * 3 = 156
        assert_eq!(
            resultant(&int(0, &[4, 6]), &int(0, &[3, 0, 3])).abs(),
            156.into()
        );
    }

    #[test]
    fn constant_arguments() {
        assert_eq!(resultant(&int(0, &[5]), &int(0, &[1, 1, 1])), 25.into());
        assert_eq!(resultant(&int(0, &[1, 1, 1]), &int(0, &[5])), 25.into());
    }
}
