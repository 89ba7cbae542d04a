//! Explicit degree 1 del Pezzo surfaces over small fields, used where no
//! blow-up construction is available.

use super::{Ambient, Form, SurfaceModel};
use crate::error::Result;
use crate::gf::make_field;

fn form2(terms: &[((u32, u32), u64)], degree: u32) -> Result<Form> {
    Form::from_terms(2, degree, terms.iter().map(|&((a, b), c)| (vec![a, b], c)))
}

fn dp1(p: u64, n: u32, forms: &[(&str, u32, &[((u32, u32), u64)])]) -> Result<SurfaceModel> {
    let f = make_field(p, n)?;
    let mut s = SurfaceModel::new(Ambient::P1123, &f);
    for &(name, d, terms) in forms {
        s = s.with_form(name, form2(terms, d)?)?;
    }
    Ok(s)
}

/// Li's surface over `F_3`:
/// `w^2 = z^3 + (2x^4 + x^2y^2 + 2y^4) z + (x^6 + 2x^4y^2 + y^6)`.
pub fn li_f3() -> Result<SurfaceModel> {
    dp1(
        3,
        1,
        &[
            ("f4", 4, &[((4, 0), 2), ((2, 2), 1), ((0, 4), 2)]),
            ("f6", 6, &[((6, 0), 1), ((4, 2), 2), ((0, 6), 1)]),
        ],
    )
}

/// Over `F_4 = F_2(u)`, `u^2 = u + 1`:
/// `w^2 + xzw + (x^3 + u^2x^2y + uxy^2 + y^3) w
///   = z^3 + (u^2x^2 + xy + y^2) x^2 z + (u^2x^4 + ux^3y + x^2y^2) y^2`.
pub fn trace5_f4() -> Result<SurfaceModel> {
    // codes in F_4 = F_2[x]/(x^2 + x + 1): u = 2, u^2 = u + 1 = 3
    const U: u64 = 2;
    const U2: u64 = 3;
    dp1(
        2,
        2,
        &[
            ("f1", 1, &[((1, 0), 1)]),
            ("f3", 3, &[((3, 0), 1), ((2, 1), U2), ((1, 2), U), ((0, 3), 1)]),
            ("f4", 4, &[((4, 0), U2), ((3, 1), 1), ((2, 2), 1)]),
            ("f6", 6, &[((4, 2), U2), ((3, 3), U), ((2, 4), 1)]),
        ],
    )
}

/// Over `F_2`: `w^2 + (x^3 + x^2y + y^3) w = z^3 + (x^4 + x^3y + y^4) z`,
/// the Bertini twist of a surface with a single rational point.
pub fn trace4_f2() -> Result<SurfaceModel> {
    dp1(
        2,
        1,
        &[
            ("f3", 3, &[((3, 0), 1), ((2, 1), 1), ((0, 3), 1)]),
            ("f4", 4, &[((4, 0), 1), ((3, 1), 1), ((0, 4), 1)]),
        ],
    )
}

/// Over `F_2`: `w^2 + yzw + (x^3 + xy^2) w
///   = z^3 + (x^4 + xy^3) z + (x^5y + x^4y^2 + x^3y^3 + x^2y^4 + y^6)`.
pub fn trace3_f2() -> Result<SurfaceModel> {
    dp1(
        2,
        1,
        &[
            ("f1", 1, &[((0, 1), 1)]),
            ("f3", 3, &[((3, 0), 1), ((1, 2), 1)]),
            ("f4", 4, &[((4, 0), 1), ((1, 3), 1)]),
            ("f6", 6, &[((5, 1), 1), ((4, 2), 1), ((3, 3), 1), ((2, 4), 1), ((0, 6), 1)]),
        ],
    )
}

/// `(name, q, model)` for every explicit surface.
pub fn explicit_surfaces() -> Result<Vec<(&'static str, u64, SurfaceModel)>> {
    Ok(vec![
        ("li-f3", 3, li_f3()?),
        ("trace5-f4", 4, trace5_f4()?),
        ("trace4-f2", 2, trace4_f2()?),
        ("trace3-f2", 2, trace3_f2()?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{bertini_twist, count_points, twist_parameter};

    #[test]
    fn explicit_counts() {
        let counts: Vec<u64> = explicit_surfaces().unwrap().iter().map(|(_, _, s)| count_points(s).unwrap().count).collect();
        assert_eq!(counts, vec![25, 37, 13, 11]);
    }

    #[test]
    fn twist_of_trace4_has_one_point() {
        let s = trace4_f2().unwrap();
        let t = bertini_twist(&s, twist_parameter(&s.field)).unwrap();
        let r = count_points(&t).unwrap();
        assert_eq!((r.count, r.trace), (1, Some(-2)));
    }
}
