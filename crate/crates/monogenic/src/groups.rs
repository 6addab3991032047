//! The hypercomplex modular group `Γ_p = <T_{e_1},...,T_{e_p}, J>`, its
//! principal and Hecke-type congruence subgroups over the standard order
//! `O_p`, word-length-truncated coset enumeration, and the Eisenstein series
//! built from the conformal weight factors.

use serde::Serialize;

use crate::algebra::{Multivector, Vector};
use crate::error::{Error, Result};
use crate::moebius::{vahlen_check, VahlenMatrix, VahlenMode, WeightKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    /// The full group `Γ_p`.
    Full,
    /// Principal congruence subgroup `Γ_p[N]`: `a-1, b, c, d-1 ∈ N O_p`.
    Principal,
    /// Hecke-type `Γ_{p,0}[N]`: `c ∈ N O_p`.
    Hecke0,
}

/// Which group, acting on `H^+(R^n)`: `p` translation generators, level `N`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GroupSpec {
    pub p: u32,
    pub level: u32,
    pub kind: GroupKind,
    /// Ambient algebra dimension for the matrices and the half-space action.
    pub n: u32,
}

impl GroupSpec {
    pub fn new(p: u32, level: u32, kind: GroupKind, n: u32) -> Result<Self> {
        if p < 1 || level < 1 {
            return Err(Error::Precondition("need p >= 1 and N >= 1".into()));
        }
        if p > n - 1 {
            return Err(Error::Precondition(format!(
                "p = {p} exceeds n-1 = {} for the half-space action",
                n - 1
            )));
        }
        Ok(GroupSpec { p, level, kind, n })
    }
}

/// Generators `T_{e_1}, ..., T_{e_p}, J` of `Γ_p` in ambient dimension `n`.
pub fn group_generators(p: u32, n: u32) -> Vec<VahlenMatrix> {
    let mut gens: Vec<VahlenMatrix> = (1..=p)
        .map(|i| VahlenMatrix::translation(&Vector::axis(n, i, 1.0)))
        .collect();
    gens.push(VahlenMatrix::inversion(n));
    gens
}

/// Is `mv` in `N O_p` (integer coefficients over blades of `e_1..e_p`,
/// divided by `N`)? Coefficient tolerance 1e-9.
pub fn in_standard_order(mv: &Multivector, p: u32, level: u32) -> bool {
    let n = mv.dim();
    let pmask = (1u32 << p) - 1;
    for mask in 0..(1u32 << n) {
        let c = mv.coeff(mask);
        if mask & !pmask != 0 {
            if c.abs() > 1e-9 {
                return false;
            }
            continue;
        }
        let scaled = c / level as f64;
        if (scaled - scaled.round()).abs() > 1e-9 {
            return false;
        }
    }
    true
}

/// Congruence membership test. All entries must be supported on blades of
/// `e_1..e_p` with integer coefficients (membership in the matrix ring over
/// `O_p`); on top of that the congruences of the requested kind are checked.
pub fn is_member(m: &VahlenMatrix, spec: &GroupSpec) -> bool {
    let n = m.dim();
    let one = Multivector::one(n);
    let over_order = [&m.a, &m.b, &m.c, &m.d]
        .iter()
        .all(|e| in_standard_order(e, spec.p, 1));
    if !over_order {
        return false;
    }
    if !vahlen_check(m, VahlenMode::Special).pseudo_det_ok {
        return false;
    }
    match spec.kind {
        GroupKind::Full => true,
        GroupKind::Principal => {
            in_standard_order(&(&m.a - &one), spec.p, spec.level)
                && in_standard_order(&m.b, spec.p, spec.level)
                && in_standard_order(&m.c, spec.p, spec.level)
                && in_standard_order(&(&m.d - &one), spec.p, spec.level)
        }
        GroupKind::Hecke0 => in_standard_order(&m.c, spec.p, spec.level),
    }
}

/// One right coset `T_p[N] M`, keyed by the bottom row.
#[derive(Debug, Clone, Serialize)]
pub struct CosetRep {
    pub matrix: VahlenMatrix,
    pub word_length: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CosetTable {
    pub spec: GroupSpec,
    pub max_word_length: usize,
    pub reps: Vec<CosetRep>,
    /// Whether the group contains `-I` (detected during enumeration); drives
    /// the paired-cancellation evaluation of the J1 series.
    pub contains_minus_identity: bool,
}

fn quantize_key(mvs: &[&Multivector]) -> Option<Vec<i64>> {
    let mut key = Vec::new();
    for mv in mvs {
        for &c in mv.coeffs() {
            let r = c.round();
            if (c - r).abs() > 1e-6 {
                return None;
            }
            key.push(r as i64);
        }
    }
    Some(key)
}

/// Enumerate distinct group elements as words in the generators and their
/// inverses up to `max_word_length`, filter by membership, and canonicalize
/// into bottom-row cosets (left translations change only the top row).
///
/// Every merge is verified: when two words share a bottom row, `M M'^{-1}`
/// must be translation-type, otherwise the enumeration aborts.
pub fn enumerate_cosets(spec: &GroupSpec, max_word_length: usize) -> Result<CosetTable> {
    if max_word_length > 12 {
        return Err(Error::ExplosionGuard(format!(
            "max_word_length {max_word_length} > 12"
        )));
    }
    let n = spec.n;
    let gens = group_generators(spec.p, n);
    let mut steps: Vec<VahlenMatrix> = Vec::new();
    for g in &gens {
        steps.push(g.clone());
        steps.push(g.inverse()?);
    }

    use std::collections::HashMap;
    // BFS over distinct matrices (exact integer keys).
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let id = VahlenMatrix::identity(n);
    let idkey = quantize_key(&[&id.a, &id.b, &id.c, &id.d]).unwrap();
    let mut frontier = vec![id.clone()];
    seen.insert(idkey, 0);
    let mut elements: Vec<(VahlenMatrix, usize)> = vec![(id, 0)];
    let mut minus_identity_seen = false;
    let guard_elements = 2_000_000usize;
    for len in 1..=max_word_length {
        let mut next = Vec::new();
        for m in &frontier {
            for s in &steps {
                let prod = m.compose(s);
                let key = match quantize_key(&[&prod.a, &prod.b, &prod.c, &prod.d]) {
                    Some(k) => k,
                    None => {
                        return Err(Error::ExplosionGuard(
                            "non-integer coefficients in word enumeration".into(),
                        ))
                    }
                };
                if seen.contains_key(&key) {
                    continue;
                }
                seen.insert(key, len);
                if elements.len() >= guard_elements {
                    return Err(Error::ExplosionGuard(format!(
                        "more than {guard_elements} elements enumerated"
                    )));
                }
                elements.push((prod.clone(), len));
                next.push(prod);
            }
        }
        frontier = next;
    }

    // Filter by membership, canonicalize by bottom row.
    let mut by_bottom: HashMap<Vec<i64>, CosetRep> = HashMap::new();
    let minus_id = VahlenMatrix::identity(n).neg();
    for (m, len) in elements {
        if m.approx_eq(&minus_id, 1e-12) {
            minus_identity_seen = true;
        }
        if !is_member(&m, spec) {
            continue;
        }
        let key = quantize_key(&[&m.c, &m.d]).unwrap();
        match by_bottom.get_mut(&key) {
            None => {
                by_bottom.insert(key, CosetRep { matrix: m, word_length: len });
            }
            Some(existing) => {
                // verify the merge: M M'^{-1} must be translation-type
                let quot = m.compose(&existing.matrix.inverse()?);
                let translation_type = quot.c.is_zero(1e-9)
                    && quot.a.approx_eq(&Multivector::one(n), 1e-9)
                    && quot.d.approx_eq(&Multivector::one(n), 1e-9)
                    && quot.b.is_vector(1e-9);
                if !translation_type {
                    return Err(Error::Precondition(
                        "bottom-row merge is not a translation coset; canonicalization unsound"
                            .into(),
                    ));
                }
                if len < existing.word_length {
                    *existing = CosetRep { matrix: m, word_length: len };
                }
            }
        }
    }

    let mut reps: Vec<CosetRep> = by_bottom.into_values().collect();
    reps.sort_by(|a, b| {
        a.word_length.cmp(&b.word_length).then_with(|| {
            let ka = quantize_key(&[&a.matrix.c, &a.matrix.d]).unwrap();
            let kb = quantize_key(&[&b.matrix.c, &b.matrix.d]).unwrap();
            ka.cmp(&kb)
        })
    });
    // -I is in the group iff it passes membership (it always lies in Γ_p;
    // for principal kind it needs -2 ∈ N O_p).
    let minus_in_group = minus_identity_seen && is_member(&minus_id, spec);
    Ok(CosetTable {
        spec: *spec,
        max_word_length,
        reps,
        contains_minus_identity: minus_in_group,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EisensteinKind {
    J1,
    J2,
    PairJ1,
    PairJ2,
}

#[derive(Debug, Clone, Serialize)]
pub struct EisensteinValue {
    pub value: Multivector,
    /// Norm contribution of the outermost word-length shell, the honest
    /// truncation diagnostic for automorphy checks.
    pub last_shell: f64,
    /// Per-word-length contribution norms.
    pub per_length: Vec<f64>,
    /// J1 over a group containing -I is evaluated with explicit M / -M
    /// pairing; record when that was done.
    pub paired: bool,
}

/// Evaluate an Eisenstein series over the coset table at `x` (pair kinds also
/// need `y`). Preconditions follow the convergence abscissas: `p < n-1` for
/// J1, `p < n-2` for J2, `p <= n-1, n >= 3` for PairJ1 and `n >= 4` for
/// PairJ2.
pub fn eisenstein_series(
    x: &Vector,
    y: Option<&Vector>,
    table: &CosetTable,
    kind: EisensteinKind,
) -> Result<EisensteinValue> {
    let spec = &table.spec;
    let n = spec.n;
    if x.dim() != n {
        return Err(Error::DimensionMismatch(x.dim(), n));
    }
    if x.last() <= 0.0 {
        return Err(Error::Precondition("x must lie in the upper half-space".into()));
    }
    match kind {
        EisensteinKind::J1 => {
            if spec.p >= n - 1 {
                return Err(Error::Precondition(format!(
                    "J1 series needs p < n-1 (p={}, n={})",
                    spec.p, n
                )));
            }
        }
        EisensteinKind::J2 => {
            if spec.p >= n - 2 {
                return Err(Error::Precondition(format!(
                    "J2 series needs p < n-2 (p={}, n={})",
                    spec.p, n
                )));
            }
        }
        EisensteinKind::PairJ1 => {
            if n < 3 || spec.p > n - 1 {
                return Err(Error::Precondition("pair J1 needs n >= 3, p <= n-1".into()));
            }
        }
        EisensteinKind::PairJ2 => {
            if n < 4 {
                return Err(Error::Precondition("pair J2 needs n >= 4".into()));
            }
        }
    }
    let is_pair = matches!(kind, EisensteinKind::PairJ1 | EisensteinKind::PairJ2);
    if is_pair {
        match y {
            Some(yv) if yv.last() > 0.0 => {}
            _ => {
                return Err(Error::Precondition(
                    "pair series needs a second upper-half-space point".into(),
                ))
            }
        }
    }
    if table.reps.is_empty() {
        return Err(Error::Precondition("empty coset table".into()));
    }

    let weight = match kind {
        EisensteinKind::J1 | EisensteinKind::PairJ1 => WeightKind::J1,
        EisensteinKind::J2 | EisensteinKind::PairJ2 => WeightKind::J2,
    };
    let paired = table.contains_minus_identity && kind == EisensteinKind::J1;

    let term = |m: &VahlenMatrix| -> Result<Multivector> {
        match kind {
            EisensteinKind::J1 | EisensteinKind::J2 => {
                crate::moebius::weight_factor(m, x, weight)
            }
            EisensteinKind::PairJ1 | EisensteinKind::PairJ2 => {
                let jx = crate::moebius::weight_factor(m, x, weight)?;
                let jy = crate::moebius::weight_factor(m, y.unwrap(), weight)?;
                Ok(&jx.reverse().conjugate() * &jy.reverse())
            }
        }
    };

    let mut acc = crate::algebra::MvAccumulator::new(n);
    let maxlen = table.reps.iter().map(|r| r.word_length).max().unwrap_or(0);
    let mut per_length = vec![0.0f64; maxlen + 1];
    for rep in &table.reps {
        let t = if paired {
            // J1(M, x) + J1(-M, x) = 0 exactly; sum the pair to expose the
            // cancellation instead of silently returning the half-sum.
            let t1 = term(&rep.matrix)?;
            let t2 = term(&rep.matrix.neg())?;
            &t1 + &t2
        } else {
            term(&rep.matrix)?
        };
        per_length[rep.word_length] += t.norm();
        acc.add(&t);
    }
    let last_shell = per_length.last().copied().unwrap_or(0.0);
    Ok(EisensteinValue { value: acc.value(), last_shell, per_length, paired })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: u32, level: u32, kind: GroupKind, n: u32) -> GroupSpec {
        GroupSpec::new(p, level, kind, n).unwrap()
    }

    #[test]
    fn generators_pass_special_vahlen() {
        let n = 4;
        for g in group_generators(1, n) {
            assert!(vahlen_check(&g, VahlenMode::Special).pass);
        }
        // p = 1 generator display
        let gens = group_generators(1, n);
        assert_eq!(gens.len(), 2);
        assert!(gens[0].b.approx_eq(&Vector::axis(n, 1, 1.0).to_mv(), 0.0));
        assert!(gens[1].b.approx_eq(&Multivector::scalar(n, -1.0), 0.0));
    }

    #[test]
    fn j_squared_is_minus_identity_and_acts_trivially() {
        let n = 4;
        let j = VahlenMatrix::inversion(n);
        let jj = j.compose(&j);
        assert!(jj.approx_eq(&VahlenMatrix::identity(n).neg(), 1e-14));
        let x = Vector::new(vec![0.3, -0.2, 0.5, 1.1]);
        let y = crate::moebius::moebius_apply(&jj, &x).unwrap();
        assert!(y.sub(&x).norm() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let n = 4;
        let id = VahlenMatrix::identity(n);
        for level in [1, 2, 3, 5] {
            assert!(is_member(&id, &spec(1, level, GroupKind::Principal, n)));
        }
        let j = VahlenMatrix::inversion(n);
        assert!(is_member(&j, &spec(1, 1, GroupKind::Hecke0, n)));
        assert!(!is_member(&j, &spec(1, 3, GroupKind::Principal, n)));
        // T^3 in Γ_1[3]
        let t = VahlenMatrix::translation(&Vector::axis(n, 1, 1.0));
        let t3 = t.compose(&t).compose(&t);
        assert!(is_member(&t3, &spec(1, 3, GroupKind::Principal, n)));
        assert!(!is_member(&t, &spec(1, 3, GroupKind::Principal, n)));
    }

    #[test]
    fn subgroup_chain_on_enumerated_matrices() {
        let n = 4;
        let full = spec(1, 1, GroupKind::Full, n);
        let table = enumerate_cosets(&full, 6).unwrap();
        let principal = spec(1, 2, GroupKind::Principal, n);
        let hecke = spec(1, 2, GroupKind::Hecke0, n);
        for rep in &table.reps {
            if is_member(&rep.matrix, &principal) {
                assert!(is_member(&rep.matrix, &hecke));
            }
            if is_member(&rep.matrix, &hecke) {
                assert!(is_member(&rep.matrix, &full));
            }
        }
    }

    #[test]
    fn coset_enumeration_basics() {
        let n = 4;
        let table = enumerate_cosets(&spec(1, 1, GroupKind::Full, n), 2).unwrap();
        // identity coset (c,d) = (0,1) and the J coset (c,d) = (1,0)
        let has = |c: &Multivector, d: &Multivector| {
            table
                .reps
                .iter()
                .any(|r| r.matrix.c.approx_eq(c, 1e-12) && r.matrix.d.approx_eq(d, 1e-12))
        };
        assert!(has(&Multivector::zero(n), &Multivector::one(n)));
        assert!(has(&Multivector::one(n), &Multivector::zero(n)));
        // all pass membership, no duplicate bottom rows
        for (i, r) in table.reps.iter().enumerate() {
            assert!(is_member(&r.matrix, &table.spec));
            for r2 in &table.reps[i + 1..] {
                assert!(
                    !(r.matrix.c.approx_eq(&r2.matrix.c, 1e-9)
                        && r.matrix.d.approx_eq(&r2.matrix.d, 1e-9)),
                    "duplicate bottom row"
                );
            }
        }
        assert!(table.contains_minus_identity);
        // counts monotone in word length
        let t3 = enumerate_cosets(&spec(1, 1, GroupKind::Full, n), 4).unwrap();
        assert!(t3.reps.len() >= table.reps.len());
    }

    #[test]
    fn minus_identity_detection_by_level() {
        let n = 4;
        // -I ∈ Γ_1[2] (since -2 ∈ 2 O_p) but -I ∉ Γ_1[3]
        let t2 = enumerate_cosets(&spec(1, 2, GroupKind::Principal, n), 4).unwrap();
        assert!(t2.contains_minus_identity);
        let t3 = enumerate_cosets(&spec(1, 3, GroupKind::Principal, n), 4).unwrap();
        assert!(!t3.contains_minus_identity);
    }

    #[test]
    fn eisenstein_limit_toward_infinity_principal_level_3() {
        let n = 4;
        let table = enumerate_cosets(&spec(1, 3, GroupKind::Principal, n), 6).unwrap();
        let x = Vector::axis(n, n, 50.0);
        let v = eisenstein_series(&x, None, &table, EisensteinKind::J1).unwrap();
        assert!(
            (&v.value - &Multivector::one(n)).norm() < 1e-3,
            "limit {} != 1",
            v.value
        );
        assert!(!v.paired);
    }

    #[test]
    fn eisenstein_j1_vanishes_by_pairing_over_full_group() {
        let n = 4;
        let table = enumerate_cosets(&spec(1, 1, GroupKind::Full, n), 5).unwrap();
        let x = Vector::new(vec![0.2, 0.1, -0.3, 1.4]);
        let v = eisenstein_series(&x, None, &table, EisensteinKind::J1).unwrap();
        assert!(v.paired);
        assert!(v.value.norm() < 1e-12, "paired sum {}", v.value.norm());
    }

    #[test]
    fn pair_series_hermitian_symmetry() {
        let n = 4;
        let table = enumerate_cosets(&spec(1, 1, GroupKind::Full, n), 4).unwrap();
        let x = Vector::new(vec![0.2, 0.1, -0.3, 1.4]);
        let y = Vector::new(vec![-0.4, 0.3, 0.2, 0.9]);
        for kind in [EisensteinKind::PairJ1, EisensteinKind::PairJ2] {
            let exy = eisenstein_series(&x, Some(&y), &table, kind).unwrap();
            let eyx = eisenstein_series(&y, Some(&x), &table, kind).unwrap();
            assert!(
                exy.value.approx_eq(&eyx.value.conjugate(), 1e-9),
                "{kind:?}: E(x,y) != conj E(y,x)"
            );
        }
    }

    #[test]
    fn automorphy_within_truncation_diagnostics() {
        let n = 4;
        let table = enumerate_cosets(&spec(1, 3, GroupKind::Principal, n), 6).unwrap();
        // M0 = T^3 lies in Γ_1[3]
        let t = VahlenMatrix::translation(&Vector::axis(n, 1, 1.0));
        let m0 = t.compose(&t).compose(&t);
        let x = Vector::new(vec![0.15, -0.2, 0.3, 1.2]);
        let ex = eisenstein_series(&x, None, &table, EisensteinKind::J1).unwrap();
        let mx = crate::moebius::moebius_apply(&m0, &x).unwrap();
        let emx = eisenstein_series(&mx, None, &table, EisensteinKind::J1).unwrap();
        let j = crate::moebius::weight_factor(&m0, &x, WeightKind::J1).unwrap();
        let diff = (&ex.value - &(&j * &emx.value)).norm();
        // reindexing mismatch lives in the outer word-length shells
        let budget = 4.0 * (ex.last_shell + emx.last_shell) + 1e-9;
        assert!(diff < budget, "automorphy diff {diff:.3e} > budget {budget:.3e}");
    }
}
