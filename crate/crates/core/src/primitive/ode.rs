use crate::poly::{Poly, Q};

/// The polynomial solution of `E + (1/r) Σ_{i∈vars} u_i ∂_i E = B`.
///
/// The operator is diagonal on homogeneous components in `vars`: degree `m`
/// is scaled by `r/(r+m)`, which is `∫_0^1 s^{m/r} ds`. The other variables
/// are parameters.
pub fn ode_solve(b: &Poly, vars: &[usize], r: usize) -> Poly {
    assert!(r >= 1, "rate must be positive");
    b.map_by_degree(vars, |m| Q::new((r as i64).into(), ((r + m as usize) as i64).into()))
}

/// `E + (1/r) Σ u_i ∂_i E − B`.
pub fn ode_residual(e: &Poly, b: &Poly, vars: &[usize], r: usize) -> Poly {
    let n = e.nvars();
    let mut euler = Poly::zero(n);
    for &i in vars {
        euler = &euler + &(&Poly::var(n, i) * &e.derivative(i));
    }
    &(e + &euler.scale(&Q::new(1.into(), (r as i64).into()))) - b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qr};

    #[test]
    fn constants_are_fixed() {
        assert_eq!(ode_solve(&Poly::constant(2, q(3)), &[0, 1], 4), Poly::constant(2, q(3)));
    }

    #[test]
    fn product_of_two_at_rate_two() {
        let b = &Poly::var(2, 0) * &Poly::var(2, 1);
        let e = ode_solve(&b, &[0, 1], 2);
        assert_eq!(e, b.scale(&qr(1, 2)));
        assert!(ode_residual(&e, &b, &[0, 1], 2).is_zero());
    }

    #[test]
    fn zero_maps_to_zero() {
        assert!(ode_solve(&Poly::zero(3), &[0, 1, 2], 1).is_zero());
    }
}
