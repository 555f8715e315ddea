use std::collections::BTreeMap;

use super::{rank2_flats, Arrangement, ArrangementError, CurveArrangement, Hyperplane};
use crate::exactla::{int, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Braid(usize),
    K5(Option<Vec<(Rational, Rational)>>),
    BolExt(usize),
    PLambda(Rational),
    NonFano,
    A0,
}

pub fn gen(family: &Family) -> Result<CurveArrangement, ArrangementError> {
    let a = match family {
        Family::Braid(n) => braid(*n)?,
        Family::K5(points) => k5(points.as_deref())?,
        Family::BolExt(m) => bol_ext(*m)?,
        Family::PLambda(l) => p_lambda(l)?,
        Family::NonFano => nonfano()?,
        Family::A0 => a0()?,
    };
    Ok(CurveArrangement::from_arrangement(a))
}

fn census(a: &Arrangement) -> BTreeMap<usize, usize> {
    let mut c = BTreeMap::new();
    for f in rank2_flats(a) {
        *c.entry(f.multiplicity).or_insert(0) += 1;
    }
    c
}

fn expect_census(a: &Arrangement, expected: &[(usize, usize)]) -> Result<(), ArrangementError> {
    let got = census(a);
    let want: BTreeMap<usize, usize> = expected.iter().copied().collect();
    if got != want {
        return Err(ArrangementError::Degenerate(format!("{}: flat census {:?}, expected {:?}", a.label(), got, want)));
    }
    Ok(())
}

fn h(c: &[i64]) -> Hyperplane {
    Hyperplane::from_i64(c)
}

/// Quotient of the braid arrangement: in coordinates `(x_1, …, x_n, x_0)`
/// the forms `x_i`, `x_0`, `x_i − x_0`, `x_i − x_j`.
fn braid(n: usize) -> Result<Arrangement, ArrangementError> {
    if n < 2 {
        return Err(ArrangementError::Degenerate(format!("braid needs n ≥ 2, got {n}")));
    }
    let dim = n + 1;
    let unit = |i: usize| -> Vec<i64> {
        let mut v = vec![0; dim];
        v[i] = 1;
        v
    };
    let mut hs = Vec::new();
    for i in 0..n {
        hs.push(h(&unit(i)));
    }
    hs.push(h(&unit(n)));
    for i in 0..n {
        let mut v = unit(i);
        v[n] = -1;
        hs.push(h(&v));
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = unit(i);
            v[j] = -1;
            hs.push(h(&v));
        }
    }
    let label = if n == 2 { "A0,5".to_string() } else { format!("A0,{}", n + 3) };
    let a = Arrangement::new(n, hs, &label)?;
    assert_eq!(a.len(), n * (n - 1) / 2 + 2 * n + 1);
    if n == 2 {
        expect_census(&a, &[(2, 3), (3, 4)])?;
    }
    Ok(a)
}

fn default_k5_points() -> Vec<(Rational, Rational)> {
    [(0, 0), (1, 0), (0, 1), (1, 1), (2, 3)].iter().map(|&(a, b)| (int(a), int(b))).collect()
}

/// The ten lines joining five points of the chart z = 1.
fn k5(points: Option<&[(Rational, Rational)]>) -> Result<Arrangement, ArrangementError> {
    let pts = points.map(<[_]>::to_vec).unwrap_or_else(default_k5_points);
    if pts.len() != 5 {
        return Err(ArrangementError::Degenerate(format!("k5 needs 5 points, got {}", pts.len())));
    }
    let hom: Vec<Vec<Rational>> = pts.iter().map(|(x, y)| vec![x.clone(), y.clone(), int(1)]).collect();
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                let c = super::cross(&hom[i], &hom[j]);
                let d: Rational = c.iter().zip(&hom[k]).map(|(a, b)| a * b).sum();
                if d == int(0) {
                    return Err(ArrangementError::Degenerate(format!("points {i}, {j}, {k} are collinear")));
                }
            }
        }
    }
    let mut hs = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            hs.push(Hyperplane::new(super::cross(&hom[i], &hom[j])).expect("distinct points"));
        }
    }
    let a = Arrangement::new(2, hs, "K5")?;
    expect_census(&a, &[(2, 15), (4, 5)])?;
    Ok(a)
}

/// Added one at a time to the braid arrangement; each passes through one
/// of its double points.
fn bol_lines() -> [Hyperplane; 3] {
    [h(&[2, 1, -1]), h(&[1, 3, -1]), h(&[1, -1, 5])]
}

fn bol_ext(m: usize) -> Result<Arrangement, ArrangementError> {
    if !(1..=3).contains(&m) {
        return Err(ArrangementError::Degenerate(format!("bol_ext needs m in 1..=3, got {m}")));
    }
    let mut a = braid(2)?;
    for (step, line) in bol_lines().iter().take(m).enumerate() {
        let before = rank2_flats(&a);
        let label = format!("B{}", 6 + step);
        let next = a.extended(std::slice::from_ref(line), &label)?;
        let new_idx = next.len() - 1;
        let mut promoted = 0;
        for f in rank2_flats(&next).iter().filter(|f| f.members.contains(&new_idx)) {
            match f.multiplicity {
                2 => {}
                3 => {
                    let old: Vec<usize> = f.members.iter().copied().filter(|&i| i != new_idx).collect();
                    if !before.iter().any(|g| g.members == old && g.multiplicity == 2) {
                        return Err(ArrangementError::Degenerate(format!("{label}: added line passes a multiple point")));
                    }
                    promoted += 1;
                }
                _ => return Err(ArrangementError::Degenerate(format!("{label}: added line is not generic"))),
            }
        }
        if promoted != 1 {
            return Err(ArrangementError::Degenerate(format!("{label}: added line promotes {promoted} double points")));
        }
        a = next;
    }
    Ok(a)
}

/// The braid arrangement with `x − λz` and `y − λz` added.
fn p_lambda(l: &Rational) -> Result<Arrangement, ArrangementError> {
    if *l == int(0) || *l == int(1) {
        return Err(ArrangementError::Degenerate(format!("λ must avoid 0 and 1, got {l}")));
    }
    let extra = [
        Hyperplane::new(vec![int(1), int(0), -l.clone()]).expect("nonzero"),
        Hyperplane::new(vec![int(0), int(1), -l.clone()]).expect("nonzero"),
    ];
    let a = braid(2)?.extended(&extra, "P")?;
    let c = census(&a);
    if c.get(&4) != Some(&2) || c.get(&3) != Some(&3) || c.keys().any(|&m| m > 4) {
        return Err(ArrangementError::Degenerate(format!("P(λ={l}): flat census {c:?}")));
    }
    Ok(a)
}

fn nonfano() -> Result<Arrangement, ArrangementError> {
    let forms = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [0, 1, 1], [1, 0, 1], [1, 1, 1]];
    let a = Arrangement::new(2, forms.iter().map(|f| h(f)).collect(), "F")?;
    expect_census(&a, &[(2, 3), (3, 6)])?;
    Ok(a)
}

/// Three pencils of three lines through (0:1:0), (1:0:0) and (0:0:1).
fn a0() -> Result<Arrangement, ArrangementError> {
    let mut hs = Vec::new();
    for a in 1..=3 {
        hs.push(h(&[1, 0, -a]));
    }
    for b in 1..=3 {
        hs.push(h(&[0, 1, -b]));
    }
    for c in 1..=3 {
        hs.push(h(&[1, c, 0]));
    }
    let a = Arrangement::new(2, hs, "A0")?;
    expect_census(&a, &[(2, 27), (3, 3)])?;
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn braid_counts() {
        for n in 2..=5 {
            let a = braid(n).unwrap();
            assert_eq!(a.len(), n * (n - 1) / 2 + 2 * n + 1);
        }
        assert!(braid(1).is_err());
    }

    #[test]
    fn braid_two_is_the_six_line_arrangement() {
        let a = braid(2).unwrap();
        let want: Vec<Hyperplane> =
            [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, -1], [0, 1, -1], [1, -1, 0]].iter().map(|c| h(c)).collect();
        assert_eq!(a.hyperplanes(), &want[..]);
    }

    #[test]
    fn census_of_generated_families() {
        assert_eq!(census(&braid(2).unwrap()), BTreeMap::from([(2, 3), (3, 4)]));
        assert_eq!(census(&k5(None).unwrap()), BTreeMap::from([(2, 15), (4, 5)]));
        assert_eq!(census(&nonfano().unwrap()), BTreeMap::from([(2, 3), (3, 6)]));
        assert_eq!(census(&bol_ext(1).unwrap()).get(&3), Some(&5));
        assert_eq!(census(&bol_ext(3).unwrap()).get(&3), Some(&7));
        assert_eq!(census(&p_lambda(&int(2)).unwrap()).get(&4), Some(&2));
    }

    #[test]
    fn degenerate_parameters() {
        assert!(p_lambda(&int(0)).is_err());
        assert!(p_lambda(&int(1)).is_err());
        let collinear = vec![(int(0), int(0)), (int(1), int(1)), (int(2), int(2)), (int(0), int(1)), (int(5), int(7))];
        assert!(k5(Some(&collinear)).is_err());
        assert!(bol_ext(4).is_err());
    }

    #[test]
    fn suggested_grid_for_a0_has_extra_triple_points() {
        // x − az, y − bz, x − cy with a, b ∈ {1,2,4}, c ∈ {1,2,3}: (1:1:1)
        // lies on x − z, y − z and x − y, among others.
        let mut hs = Vec::new();
        for a in [1, 2, 4] {
            hs.push(h(&[1, 0, -a]));
        }
        for b in [1, 2, 4] {
            hs.push(h(&[0, 1, -b]));
        }
        for c in [1, 2, 3] {
            hs.push(h(&[1, -c, 0]));
        }
        let grid = Arrangement::new(2, hs, "grid").unwrap();
        assert!(census(&grid)[&3] > 3);
        assert_eq!(census(&a0().unwrap())[&3], 3);
    }
}
