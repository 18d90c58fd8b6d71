//! Coordinate changes that bring `G = f + t·g` into the shape each weight
//! choice needs. Each one returns the new equation and the step taken, or
//! `None` for the step when the equation already has the required shape.

use num_traits::Zero;

use super::{CdvError, TransformKind, TransformStep, T, Y1, Y2, Y3};
use crate::initial::quadratic_rank;
use crate::poly::{rat, squarefree_decompose, Monomial, Polynomial, Rational};

fn mono(e: [u32; 4]) -> Monomial {
    Monomial::new(e.to_vec())
}

fn var(g: &Polynomial, i: usize) -> Polynomial {
    Polynomial::var(g.ring(), i)
}

/// `g` in `G = f(y) + t·g(y, t)`.
pub(super) fn perturbation(g: &Polynomial) -> Polynomial {
    let f = g.evaluate_var(T, &Rational::zero());
    (g - &f)
        .exact_div(&var(g, T))
        .expect("G − G|t=0 is divisible by t")
}

fn inconsistent(context: &str, g: &Polynomial) -> CdvError {
    CdvError::Inconsistent {
        context: context.to_string(),
        state: g.to_string(),
    }
}

/// Rank-one quadratic part `(y₁ + ℓ)²` is moved to `y₁²` by `y₁ → y₁ − ℓ`.
pub fn complete_square(g: &Polynomial) -> Result<(Polynomial, Option<TransformStep>), CdvError> {
    let q = g.homogeneous_part(2);
    let y1 = var(g, Y1);
    if q.coefficient(&mono([2, 0, 0, 0])) != rat(1) {
        return Err(CdvError::Precondition(
            "quadratic part must contain y1^2 with coefficient 1".into(),
        ));
    }
    let rank = quadratic_rank(g);
    if rank != 1 {
        return Err(CdvError::Precondition(format!(
            "complete_square needs quadratic rank 1, found {rank}"
        )));
    }
    let half = Rational::new(1.into(), 2.into());
    let mut ell = Polynomial::zero(g.ring());
    for v in [Y2, Y3, T] {
        let mut e = [0; 4];
        e[Y1] = 1;
        e[v] = 1;
        let c = q.coefficient(&mono(e));
        ell = &ell + &var(g, v).scale(&(c * &half));
    }
    if (&y1 + &ell).pow(2) != q {
        return Err(CdvError::Precondition(
            "quadratic part is not the square of y1 + (linear form)".into(),
        ));
    }
    if ell.is_zero() {
        return Ok((g.clone(), None));
    }
    let replacement = &y1 - &ell;
    let out = g.substitute(Y1, &replacement)?;
    if out.homogeneous_part(2) != y1.pow(2) {
        return Err(inconsistent("complete_square left a non-y1^2 quadratic part", &out));
    }
    Ok((
        out,
        Some(TransformStep::new(TransformKind::CompleteSquare, Y1, replacement)),
    ))
}

/// Terms of the quadratic part of `g` free of `y₁`.
fn cube_quadric(g: &Polynomial) -> Polynomial {
    perturbation(g)
        .homogeneous_part(2)
        .filter_terms(|m, _| m.exponent(Y1) == 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubeOutcome {
    Shifted(Polynomial, Option<TransformStep>),
    /// `y₂³ + t·Q` is not the cube of a linear form.
    NotACube,
}

/// If `y₂³ + t·Q(y₂, y₃, t)` equals `(y₂ + αy₃ + βt)³`, shifts
/// `y₂ → y₂ − αy₃ − βt` so that `Q` vanishes.
pub fn complete_cube(g: &Polynomial) -> Result<CubeOutcome, CdvError> {
    let q = cube_quadric(g);
    if q.is_zero() {
        return Ok(CubeOutcome::Shifted(g.clone(), None));
    }
    let (y2, y3, t) = (var(g, Y2), var(g, Y3), var(g, T));
    let cubic = &y2.pow(3) + &(&t * &q);
    let third = Rational::new(1.into(), 3.into());
    let alpha = cubic.coefficient(&mono([0, 2, 1, 0])) * &third;
    let beta = cubic.coefficient(&mono([0, 2, 0, 1])) * &third;
    let lin = &(&y2 + &y3.scale(&alpha)) + &t.scale(&beta);
    if lin.pow(3) != cubic {
        return Ok(CubeOutcome::NotACube);
    }
    let replacement = &(&y2 - &y3.scale(&alpha)) - &t.scale(&beta);
    let out = g.substitute(Y2, &replacement)?;
    if !cube_quadric(&out).is_zero() {
        return Err(inconsistent("complete_cube left a nonzero Q", &out));
    }
    Ok(CubeOutcome::Shifted(
        out,
        Some(TransformStep::new(TransformKind::CompleteCube, Y2, replacement)),
    ))
}

/// `(L₂, C₂)`: the `y₃, t` part of the linear form multiplying `y₁` in the
/// quadratic part of `g`, and the cubic part of `g` in `y₃, t` alone.
pub(super) fn l2_c2(g: &Polynomial) -> (Polynomial, Polynomial) {
    let pert = perturbation(g);
    let g2 = pert.homogeneous_part(2);
    let l2 = &var(g, Y3).scale(&g2.coefficient(&mono([1, 0, 1, 0])))
        + &var(g, T).scale(&g2.coefficient(&mono([1, 0, 0, 1])));
    let c2 = pert
        .homogeneous_part(3)
        .filter_terms(|m, _| m.exponent(Y1) == 0 && m.exponent(Y2) == 0);
    (l2, c2)
}

/// `y₁ → y₁ − ½·t·L₂(y₃, t)`, clearing `L₂` and `C₂`; only valid when the
/// `(2,2,1)` initial form is a perfect square.
pub fn e7_shift(g: &Polynomial) -> Result<(Polynomial, Option<TransformStep>), CdvError> {
    let (l2, c2) = l2_c2(g);
    if l2.is_zero() && c2.is_zero() {
        return Ok((g.clone(), None));
    }
    let half = Rational::new(1.into(), 2.into());
    let replacement = &var(g, Y1) - &(&var(g, T) * &l2).scale(&half);
    let out = g.substitute(Y1, &replacement)?;
    let (l2n, c2n) = l2_c2(&out);
    if !l2n.is_zero() || !c2n.is_zero() {
        return Err(inconsistent("e7_shift did not clear L2 and C2", &out));
    }
    Ok((
        out,
        Some(TransformStep::new(TransformKind::E7Shift, Y1, replacement)),
    ))
}

/// Coefficients `(c_y3, c_t)` of a linear form in `y₃, t`.
fn linear_y3_t(p: &Polynomial) -> Option<(Rational, Rational)> {
    if p.total_degree().ok()? != 1 || p.terms().any(|(m, _)| m.exponent(Y1) + m.exponent(Y2) > 0) {
        return None;
    }
    if !p.constant_term().is_zero() {
        return None;
    }
    Some((
        p.coefficient(&mono([0, 0, 1, 0])),
        p.coefficient(&mono([0, 0, 0, 1])),
    ))
}

/// When the `(3,2,1)` initial form has no factor of multiplicity one, the
/// binary quintic `B = y₃⁵ + t·F₂(y₃, t)` is `M̃²Ñ³` (possibly `L⁵`). Shifts
/// `y₃ → y₃ − αt` where `Ñ ∝ y₃ + αt`, after which the quintic reads
/// `y₃³(y₃ + a·t)²`; returns `a` alongside the step.
pub fn e8_y3_shift(
    g: &Polynomial,
) -> Result<(Polynomial, Option<TransformStep>, Rational), CdvError> {
    let pert = perturbation(g);
    let p_terms = pert
        .homogeneous_part(3)
        .filter_terms(|m, _| m.exponent(Y1) == 0 && m.exponent(Y2) == 1);
    if !p_terms.is_zero() {
        return Err(inconsistent(
            "cubic part of g contains y2*y3^k*t^(2-k) although the (3,2,1) form has no simple factor",
            g,
        ));
    }
    let quintic = g.filter_terms(|m, _| m.degree() == 5 && m.exponent(Y1) + m.exponent(Y2) == 0);
    let dec = squarefree_decompose(&quintic)?;
    let mults: Vec<u32> = dec.parts.iter().map(|(_, k)| *k).collect();
    let (m_factor, n_factor) = match mults.as_slice() {
        [2, 3] => (dec.parts[0].0.clone(), dec.parts[1].0.clone()),
        [5] => (dec.parts[0].0.clone(), dec.parts[0].0.clone()),
        _ => {
            return Err(inconsistent(
                &format!("binary quintic {quintic} is not of shape M^2*N^3"),
                g,
            ))
        }
    };
    let (Some((n3, nt)), Some(_)) = (linear_y3_t(&n_factor), linear_y3_t(&m_factor)) else {
        return Err(inconsistent("quintic factors are not linear forms in y3, t", g));
    };
    if n3.is_zero() {
        return Err(inconsistent("cube factor is proportional to t", g));
    }
    let alpha = &nt / &n3;
    let y3 = var(g, Y3);
    let replacement = &y3 - &var(g, T).scale(&alpha);
    let shifted_m = m_factor.substitute(Y3, &replacement)?;
    let (m3, mt) = linear_y3_t(&shifted_m).expect("linear substitution keeps M linear");
    let a = &mt / &m3;
    if alpha.is_zero() {
        return Ok((g.clone(), None, a));
    }
    let out = g.substitute(Y3, &replacement)?;
    Ok((
        out,
        Some(
            TransformStep::new(TransformKind::E8Y3Shift, Y3, replacement).with_parameter(a.clone()),
        ),
        a,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::poly::Ring;

    fn ring() -> Ring {
        Ring::new(&["y1", "y2", "y3", "t"]).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        parse(&ring(), s).unwrap()
    }

    #[test]
    fn square_completion() {
        let (out, step) = complete_square(&p("(y1 + t)^2 + y2^3 + y3^4")).unwrap();
        assert_eq!(out, p("y1^2 + y2^3 + y3^4"));
        let step = step.unwrap();
        assert_eq!(step.replacement, p("y1 - t"));
        assert_eq!(step.kind, TransformKind::CompleteSquare);

        let g = p("y1^2 + y2^3 + y3^4 + t*y2^2");
        assert_eq!(complete_square(&g).unwrap(), (g.clone(), None));

        assert!(matches!(
            complete_square(&p("y1^2 + y2*t + y3^3")),
            Err(CdvError::Precondition(_))
        ));
    }

    #[test]
    fn cube_completion() {
        let g = p("y1^2 + y2^3 + y3^4 + t*(3*y2^2 + 3*t*y2 + t^2)");
        match complete_cube(&g).unwrap() {
            CubeOutcome::Shifted(out, Some(step)) => {
                assert_eq!(step.replacement, p("y2 - t"));
                assert_eq!(out, p("y1^2 + y2^3 + y3^4"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let g = p("y1^2 + y2^3 + y3^4 + t*y1*y3");
        assert_eq!(complete_cube(&g).unwrap(), CubeOutcome::Shifted(g.clone(), None));
        let g = p("y1^2 + y2^3 + y3^4 + t*y3^2");
        assert_eq!(complete_cube(&g).unwrap(), CubeOutcome::NotACube);
    }

    #[test]
    fn e7_square_shift() {
        let g = p("y1^2 + y2^3 + y2*y3^3 + t*(y1*y3 + 1/4*t*y3^2)");
        let (out, step) = e7_shift(&g).unwrap();
        assert_eq!(step.unwrap().replacement, p("y1 - 1/2*y3*t"));
        assert_eq!(out, p("y1^2 + y2^3 + y2*y3^3"));
        let (l2, c2) = l2_c2(&out);
        assert!(l2.is_zero() && c2.is_zero());

        let plain = p("y1^2 + y2^3 + y2*y3^3 + t*y2^3");
        assert_eq!(e7_shift(&plain).unwrap(), (plain.clone(), None));
    }

    #[test]
    fn e8_quintic_shift() {
        let g = p("y1^2 + y2^3 + y3^3*(y3 - t)^2");
        let (out, step, a) = e8_y3_shift(&g).unwrap();
        assert_eq!(out, g);
        assert!(step.is_none());
        assert_eq!(a, rat(-1));

        let g = p("y1^2 + y2^3 + (y3 + t)^3*(y3 - t)^2");
        let (out, step, a) = e8_y3_shift(&g).unwrap();
        assert_eq!(step.unwrap().replacement, p("y3 - t"));
        assert_eq!(out, p("y1^2 + y2^3 + y3^3*(y3 - 2*t)^2"));
        assert_eq!(a, rat(-2));

        let g = p("y1^2 + y2^3 + y3^5");
        let (out, step, a) = e8_y3_shift(&g).unwrap();
        assert_eq!((out, step, a), (g, None, rat(0)));

        let bad = p("y1^2 + y2^3 + y3^5 + t*y3^4");
        assert!(matches!(e8_y3_shift(&bad), Err(CdvError::Inconsistent { .. })));
        let with_p = p("y1^2 + y2^3 + y3^5 + t*y2*y3^2");
        assert!(matches!(e8_y3_shift(&with_p), Err(CdvError::Inconsistent { .. })));
    }
}
