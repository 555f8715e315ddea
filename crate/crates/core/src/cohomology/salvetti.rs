use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};

use super::CohomologyError;
use crate::arrangement::Arrangement;
use crate::exactla::{int, MatrixQ, Rational};

type Sign = Vec<i8>;

fn sgn(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Affine equations `A u + B v + C = 0` of all lines but `inf`, in a chart
/// where `inf` is the line at infinity.
fn to_affine(a: &Arrangement, inf: usize) -> Vec<[Rational; 3]> {
    let li = a.hyperplanes()[inf].coeffs();
    let basis = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut t = None;
    'outer: for x in 0..3 {
        for y in x + 1..3 {
            let rows = vec![basis[x].iter().map(|&c| int(c)).collect(), basis[y].iter().map(|&c| int(c)).collect(), li.to_vec()];
            let m = MatrixQ::from_rows(rows, 3);
            if m.rank() == 3 {
                t = Some(m);
                break 'outer;
            }
        }
    }
    let tt = t.expect("nonzero line").transpose();
    a.hyperplanes()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != inf)
        .map(|(_, h)| {
            let y = tt.solve(h.coeffs()).expect("invertible");
            [y[0].clone(), y[1].clone(), y[2].clone()]
        })
        .collect()
}

fn half(d: &(Rational, Rational)) -> u8 {
    if d.1.is_positive() || (d.1.is_zero() && d.0.is_positive()) {
        0
    } else {
        1
    }
}

fn angle_cmp(p: &(Rational, Rational), q: &(Rational, Rational)) -> Ordering {
    half(p).cmp(&half(q)).then_with(|| {
        let cr = &p.0 * &q.1 - &p.1 * &q.0;
        0.cmp(&sgn(&cr))
    })
}

/// `h¹(M, L_ρ)` for the rank-one local system with monodromy `ρ_i` around the
/// `i`-th line of a real arrangement in P², computed from the Salvetti
/// complex of the affine part with line 0 sent to infinity.
pub fn local_system_h1(a: &Arrangement, rho: &[Rational]) -> Result<usize, CohomologyError> {
    if a.ambient_dim() != 2 {
        return Err(CohomologyError::LocalSystem("a line arrangement in P²".into()));
    }
    if rho.len() != a.len() {
        return Err(CohomologyError::IndexMismatch { got: rho.len(), expected: a.len() });
    }
    if rho.iter().any(Zero::is_zero) {
        return Err(CohomologyError::LocalSystem("nonzero monodromy".into()));
    }
    if !rho.iter().product::<Rational>().is_one() {
        return Err(CohomologyError::LocalSystem("monodromies with product 1".into()));
    }
    if a.len() == 1 {
        return Ok(0);
    }
    let lines = to_affine(a, 0);
    // H¹(L) is dual to H₁(L^∨).
    let w: Vec<Rational> = rho[1..].iter().map(|x| x.recip()).collect();
    let n = lines.len();
    let ev = |k: usize, p: &(Rational, Rational)| &lines[k][0] * &p.0 + &lines[k][1] * &p.1 + &lines[k][2];
    let sign_at = |p: &(Rational, Rational)| -> Sign { (0..n).map(|k| sgn(&ev(k, p))).collect() };

    let mut verts: BTreeMap<(Rational, Rational), BTreeSet<usize>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let [a1, b1, c1] = &lines[i];
            let [a2, b2, c2] = &lines[j];
            let det = a1 * b2 - a2 * b1;
            if det.is_zero() {
                continue;
            }
            let x = (b1 * c2 - b2 * c1) / &det;
            let y = (c1 * a2 - c2 * a1) / &det;
            let e = verts.entry((x, y)).or_default();
            e.insert(i);
            e.insert(j);
        }
    }

    let mut chambers: BTreeSet<Sign> = BTreeSet::new();
    // (chamber, edge, line, opposite chamber)
    let mut onecells: Vec<(Sign, Sign, usize, Sign)> = Vec::new();
    for k in 0..n {
        let [la, lb, lc] = &lines[k];
        let d = (-lb.clone(), la.clone());
        let p0 = if !lb.is_zero() { (Rational::zero(), -lc / lb) } else { (-lc / la, Rational::zero()) };
        let norm = &d.0 * &d.0 + &d.1 * &d.1;
        let at = |t: &Rational| (&p0.0 + t * &d.0, &p0.1 + t * &d.1);
        let ts: BTreeSet<Rational> = verts
            .iter()
            .filter(|(_, ls)| ls.contains(&k))
            .map(|(v, _)| ((&v.0 - &p0.0) * &d.0 + (&v.1 - &p0.1) * &d.1) / &norm)
            .collect();
        let ts: Vec<Rational> = ts.into_iter().collect();
        let mut reps = Vec::new();
        if ts.is_empty() {
            reps.push(p0.clone());
        } else {
            reps.push(at(&(&ts[0] - Rational::one())));
            for pair in ts.windows(2) {
                reps.push(at(&((&pair[0] + &pair[1]) / int(2))));
            }
            reps.push(at(&(&ts[ts.len() - 1] + Rational::one())));
        }
        for p in reps {
            let f = sign_at(&p);
            let mut cp = f.clone();
            cp[k] = 1;
            let mut cm = f.clone();
            cm[k] = -1;
            chambers.insert(cp.clone());
            chambers.insert(cm.clone());
            onecells.push((cp.clone(), f.clone(), k, cm.clone()));
            onecells.push((cm, f, k, cp));
        }
    }
    let chambers: Vec<Sign> = chambers.into_iter().collect();
    let cidx: HashMap<&Sign, usize> = chambers.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let eidx: HashMap<(Sign, Sign), usize> =
        onecells.iter().enumerate().map(|(i, (c, f, _, _))| ((c.clone(), f.clone()), i)).collect();
    let weight = |c: &Sign, k: usize| if c[k] < 0 { w[k].clone() } else { Rational::one() };

    let mut d1 = MatrixQ::zeros(chambers.len(), onecells.len());
    for (j, (c, _, k, cq)) in onecells.iter().enumerate() {
        let t = cidx[cq];
        let v = d1.get(t, j) + weight(c, *k);
        d1.set(t, j, v);
        let s = cidx[c];
        let v = d1.get(s, j) - Rational::one();
        d1.set(s, j, v);
    }

    let mut twocells: Vec<Vec<Rational>> = Vec::new();
    for (v, ls) in &verts {
        let mut rays: Vec<((Rational, Rational), usize)> = Vec::new();
        for &k in ls {
            let [la, lb, _] = &lines[k];
            rays.push(((-lb.clone(), la.clone()), k));
            rays.push(((lb.clone(), -la.clone()), k));
        }
        rays.sort_by(|x, y| angle_cmp(&x.0, &y.0));
        let m2 = rays.len();
        let base = sign_at(v);
        let sign_dir = |d: &(Rational, Rational), zero: Option<usize>| -> Sign {
            let mut s = base.clone();
            for &k in ls {
                s[k] = if Some(k) == zero { 0 } else { sgn(&(&lines[k][0] * &d.0 + &lines[k][1] * &d.1)) };
            }
            s
        };
        // sector i lies between ray i and ray i+1
        let sectors: Vec<Sign> = (0..m2)
            .map(|i| {
                let (p, q) = (&rays[i].0, &rays[(i + 1) % m2].0);
                sign_dir(&(&p.0 + &q.0, &p.1 + &q.1), None)
            })
            .collect();
        let redges: Vec<Sign> = rays.iter().map(|(d, k)| sign_dir(d, Some(*k))).collect();
        let half_m = m2 / 2;
        for s0 in 0..m2 {
            let mut col = vec![Rational::zero(); onecells.len()];
            let mut pre = Rational::one();
            for t in 0..half_m {
                let cur = &sectors[(s0 + t) % m2];
                let r = (s0 + t + 1) % m2;
                col[eidx[&(cur.clone(), redges[r].clone())]] += &pre;
                pre *= weight(cur, rays[r].1);
            }
            let forward = pre;
            let mut pre = Rational::one();
            for t in 0..half_m {
                let i = (s0 + m2 - t) % m2;
                let cur = &sectors[i];
                col[eidx[&(cur.clone(), redges[i].clone())]] -= &pre;
                pre *= weight(cur, rays[i].1);
            }
            debug_assert_eq!(forward, pre);
            twocells.push(col);
        }
    }
    let d2 = MatrixQ::from_columns(&twocells, onecells.len());
    if !d1.mul(&d2).rank().is_zero() {
        return Err(CohomologyError::LocalSystem("a consistent cell complex".into()));
    }
    let r1 = d1.rank();
    let r2 = d2.rank();
    Ok(onecells.len() - r1 - r2)
}
