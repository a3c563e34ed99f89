//! Named fixtures and seeded random generators.
//!
//! Actions come from a Lie algebra morphism `η: 𝔤 → Γ(A)` through
//! [`example_ga`]. Random algebroids mix families that are always Lie
//! algebroids (rank one, planar Poisson, linear actions, frame changes of
//! these) with raw random structure functions that almost never are.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::action::{example_ga, StrictActionData};
use crate::algebroid::{change_frame, invert_rational, poisson_to_algebroid, LieAlgebroidData, Section};
use crate::error::{G2Error, Result};
use crate::graded_poly::{rat, ratio, GradedContext, GradedPoly, Monomial, Rat};
use crate::groups::{seeded_rng, GroupTag};
use crate::integrate::{sl2_action_algebroid, IntegrationSetup};
use crate::lie2::{StrictLie2Data, StructureConstants, Tensor3};

use num_traits::Zero;
use std::sync::Arc;

pub const LIE2_NAMES: [&str; 6] = ["abelian", "sl2", "sl2-scaled", "heisenberg", "so3", "sl2-module"];

pub const ACTION_NAMES: [&str; 7] =
    ["zero", "ga-sl2-point", "tm", "ga-heisenberg", "ga-sl2", "sl2-tangent-r2", "so3-poisson"];

/// Kinds of registry entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Lie2,
    Algebroid,
    Action,
    Integration,
    TwoGroupoid,
}

#[derive(Debug, Clone)]
pub enum Payload {
    Lie2(StrictLie2Data),
    Algebroid(LieAlgebroidData),
    Action(Box<StrictActionData>),
    Integration(Box<IntegrationSetup>),
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: EntryKind,
    pub payload: Payload,
}

/// Every named entry of the registry, built and validated.
pub fn registry() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for name in LIE2_NAMES {
        out.push(CatalogEntry { name: name.into(), kind: EntryKind::Lie2, payload: Payload::Lie2(lie2(name)?) });
    }
    out.push(CatalogEntry {
        name: "so3-poisson".into(),
        kind: EntryKind::Algebroid,
        payload: Payload::Algebroid(lie_poisson(&StructureConstants::so3())?),
    });
    for name in ACTION_NAMES {
        out.push(CatalogEntry {
            name: name.into(),
            kind: EntryKind::Action,
            payload: Payload::Action(Box::new(action(name)?)),
        });
    }
    for name in crate::integrate::SETUPS {
        out.push(CatalogEntry {
            name: name.into(),
            kind: EntryKind::Integration,
            payload: Payload::Integration(Box::new(IntegrationSetup::by_name(name)?)),
        });
        out.push(CatalogEntry {
            name: name.into(),
            kind: EntryKind::TwoGroupoid,
            payload: Payload::Integration(Box::new(IntegrationSetup::by_name(name)?)),
        });
    }
    Ok(out)
}

/// The sl(2) data of the `𝔤 = 𝔥`, `δ = id` example.
pub fn sl2_lie2() -> StrictLie2Data {
    StrictLie2Data::adjoint(&StructureConstants::sl2(), rat(1))
}

pub fn lie2(name: &str) -> Result<StrictLie2Data> {
    Ok(match name {
        "abelian" => {
            let mut l = StrictLie2Data::zero(1, 1);
            l.delta[0][0] = rat(1);
            l
        }
        "sl2" => sl2_lie2(),
        "sl2-scaled" => StrictLie2Data::adjoint(&StructureConstants::sl2(), ratio(-3, 2)),
        "heisenberg" => StrictLie2Data::adjoint(&StructureConstants::heisenberg(), rat(1)),
        "so3" => StrictLie2Data::adjoint(&StructureConstants::so3(), rat(1)),
        "sl2-module" => {
            // defining representation on R², δ = 0
            let mut l = StrictLie2Data::zero(2, 3);
            l.bracket_g = StructureConstants::sl2().c;
            l.act = linear_rep_tensor(&sl2_rep());
            l
        }
        _ => return Err(G2Error::UnknownCatalog(name.to_string())),
    })
}

/// Integer matrices `B_i` with `[B_i, B_j] = −c_ij^k B_k` for sl(2).
fn sl2_rep() -> Vec<Vec<Vec<i64>>> {
    vec![vec![vec![-1, 0], vec![0, 1]], vec![vec![0, -1], vec![0, 0]], vec![vec![0, 0], vec![-1, 0]]]
}

/// Integer matrices `B_i` with `[B_i, B_j] = −c_ij^k B_k` for so(3).
fn so3_rep() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, -1, 0]],
        vec![vec![0, 0, -1], vec![0, 0, 0], vec![1, 0, 0]],
        vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]],
    ]
}

/// Integer matrices `B_i` with `[B_i, B_j] = −c_ij^k B_k` for the Heisenberg algebra.
fn heisenberg_rep() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]],
        vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 0]],
        vec![vec![0, 0, -1], vec![0, 0, 0], vec![0, 0, 0]],
    ]
}

/// Module tensor `act[i][a][b]` with `v_i · w_a = Σ_b B_i[b][a] w_b` negated,
/// so that it is a left action for the `[B_i, B_j] = −c B_k` convention.
fn linear_rep_tensor(rep: &[Vec<Vec<i64>>]) -> Tensor3 {
    rep.iter()
        .map(|b| {
            let n = b.len();
            (0..n).map(|a| (0..n).map(|c| rat(-b[c][a])).collect()).collect()
        })
        .collect()
}

/// Action algebroid `𝔤 ⋉ R^n` of the linear action `ρ_i(x) = B_i x`.
pub fn linear_action_algebroid(g: &StructureConstants, rep: &[Vec<Vec<i64>>]) -> Result<LieAlgebroidData> {
    let n = rep.first().map_or(0, Vec::len);
    let mut a = LieAlgebroidData::new(n, g.dim);
    let ctx = a.ctx().clone();
    for i in 0..g.dim {
        for j in (i + 1)..g.dim {
            for k in 0..g.dim {
                a.set_c(i, j, k, GradedPoly::constant(&ctx, g.c[i][j][k].clone()))?;
            }
        }
        for row in 0..n {
            let mut p = GradedPoly::zero(&ctx);
            for col in 0..n {
                p = p.add(&a.x(col).scale(&rat(rep[i][row][col])))?;
            }
            a.set_rho(i, row, p)?;
        }
    }
    Ok(a)
}

/// Cotangent algebroid of the linear Poisson structure `π_ij = c_ij^k x_k` on `𝔤*`.
pub fn lie_poisson(g: &StructureConstants) -> Result<LieAlgebroidData> {
    let ctx = GradedContext::new((0..g.dim).map(|i| (format!("x{}", i + 1), 0u8)))?;
    let pi: Vec<Vec<GradedPoly>> = (0..g.dim)
        .map(|i| {
            (0..g.dim)
                .map(|j| {
                    (0..g.dim).fold(GradedPoly::zero(&ctx), |acc, k| {
                        acc.add(&GradedPoly::var(&ctx, k).scale(&g.c[i][j][k])).expect("same context")
                    })
                })
                .collect()
        })
        .collect();
    poisson_to_algebroid(&pi)
}

/// Linear vector field `x ↦ B x` as a section of `TR^n`.
fn linear_field(a: &LieAlgebroidData, b: &[Vec<i64>]) -> Result<Section> {
    let ctx = a.ctx().clone();
    let coeffs = b
        .iter()
        .map(|row| {
            row.iter().enumerate().try_fold(GradedPoly::zero(&ctx), |acc, (col, c)| acc.add(&a.x(col).scale(&rat(*c))))
        })
        .collect::<Result<_>>()?;
    Ok(Section { coeffs })
}

pub fn action(name: &str) -> Result<StrictActionData> {
    let frames = |a: &LieAlgebroidData, k: usize| -> Vec<Section> { (0..k).map(|i| a.frame(i)).collect() };
    match name {
        "zero" => Ok(StrictActionData::zero(sl2_lie2(), LieAlgebroidData::tangent(2))),
        "ga-sl2-point" => {
            let a = LieAlgebroidData::from_lie_algebra(&StructureConstants::sl2());
            example_ga(&StructureConstants::sl2(), &a, &frames(&a, 3))
        }
        "tm" => {
            let a = LieAlgebroidData::tangent(1);
            example_ga(&StructureConstants::zero(1), &a, &frames(&a, 1))
        }
        "ga-heisenberg" => {
            let g = StructureConstants::heisenberg();
            let a = LieAlgebroidData::from_lie_algebra(&g);
            example_ga(&g, &a, &frames(&a, 3))
        }
        "ga-sl2" => {
            let a = sl2_action_algebroid();
            example_ga(&StructureConstants::sl2(), &a, &frames(&a, 3))
        }
        "sl2-tangent-r2" => {
            let a = LieAlgebroidData::tangent(2);
            let eta = sl2_rep().iter().map(|b| linear_field(&a, b)).collect::<Result<Vec<_>>>()?;
            example_ga(&StructureConstants::sl2(), &a, &eta)
        }
        "so3-poisson" => {
            let g = StructureConstants::so3();
            let a = lie_poisson(&g)?;
            example_ga(&g, &a, &frames(&a, 3))
        }
        _ => Err(G2Error::UnknownCatalog(name.to_string())),
    }
}

/// Small random rational with numerator in `[-3, 3]` and denominator 1 or 2.
pub fn random_rat(rng: &mut impl Rng) -> Rat {
    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

fn random_nonzero_rat(rng: &mut impl Rng) -> Rat {
    loop {
        let r = random_rat(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Random polynomial in the body variables `x_1..x_n` of `ctx` with total degree `≤ max_deg`.
pub fn random_body_poly(
    rng: &mut impl Rng,
    ctx: &Arc<GradedContext>,
    n: usize,
    max_deg: u32,
    terms: usize,
) -> GradedPoly {
    let mut p = GradedPoly::zero(ctx);
    for _ in 0..terms {
        let mut exps: Monomial = vec![0; ctx.len()];
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            if n > 0 {
                exps[rng.gen_range(0..n)] += 1;
            }
        }
        p = p.add(&GradedPoly::monomial(ctx, exps, random_rat(rng))).expect("same context");
    }
    p
}

/// Random invertible rational matrix.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> Vec<Vec<Rat>> {
    loop {
        let m: Vec<Vec<Rat>> = (0..n).map(|_| (0..n).map(|_| random_rat(rng)).collect()).collect();
        if invert_rational(&m).is_some() {
            return m;
        }
    }
}

/// Random algebroid data with `n ≤ 3`, `r ≤ 4`, coefficients of degree `≤ 2`.
/// Roughly half of the draws come from families that are always Lie algebroids.
pub fn random_algebroid(rng: &mut impl Rng) -> Result<LieAlgebroidData> {
    let family = rng.gen_range(0..7);
    let a = match family {
        // rank one: any anchor
        0 => {
            let n = rng.gen_range(1..=3);
            let mut a = LieAlgebroidData::new(n, 1);
            let ctx = a.ctx().clone();
            for al in 0..n {
                a.set_rho(0, al, random_body_poly(rng, &ctx, n, 2, 2))?;
            }
            a
        }
        // any bivector on the plane is Poisson
        1 => {
            let ctx = GradedContext::new([("x1", 0u8), ("x2", 0u8)])?;
            let f = random_body_poly(rng, &ctx, 2, 2, 3);
            let z = GradedPoly::zero(&ctx);
            poisson_to_algebroid(&[vec![z.clone(), f.clone()], vec![f.neg(), z]])?
        }
        // linear actions, possibly in a new frame
        2 => {
            let (g, rep) = match rng.gen_range(0..3) {
                0 => (StructureConstants::sl2(), sl2_rep()),
                1 => (StructureConstants::so3(), so3_rep()),
                _ => (StructureConstants::heisenberg(), heisenberg_rep()),
            };
            let a = linear_action_algebroid(&g, &rep)?;
            let m = random_invertible(rng, a.rank);
            change_frame(&a, &m)?
        }
        // linear Poisson structures, possibly in a new frame
        3 => {
            let g = [StructureConstants::sl2(), StructureConstants::so3(), StructureConstants::heisenberg()]
                .choose(rng)
                .expect("nonempty")
                .clone();
            let a = lie_poisson(&g)?;
            let m = random_invertible(rng, a.rank);
            change_frame(&a, &m)?
        }
        // unconstrained random data
        _ => {
            let n = rng.gen_range(1..=3);
            let r = rng.gen_range(1..=4);
            let mut a = LieAlgebroidData::new(n, r);
            let ctx = a.ctx().clone();
            let sparse = family == 6;
            for i in 0..r {
                for j in (i + 1)..r {
                    for k in 0..r {
                        if !sparse || rng.gen_bool(0.3) {
                            a.set_c(i, j, k, random_body_poly(rng, &ctx, n, 1, 1))?;
                        }
                    }
                }
                for al in 0..n {
                    if !sparse || rng.gen_bool(0.3) {
                        a.set_rho(i, al, random_body_poly(rng, &ctx, n, 2, 1))?;
                    }
                }
            }
            a
        }
    };
    Ok(a)
}

/// `n` seeded random algebroids.
pub fn random_algebroids(n: usize, seed: u64) -> Result<Vec<LieAlgebroidData>> {
    let mut rng: ChaCha8Rng = seeded_rng(seed);
    (0..n).map(|_| random_algebroid(&mut rng)).collect()
}

/// Rewrites `l` in the bases `v'_i = Σ p[i][j] v_j`, `w'_a = Σ q[a][b] w_b`.
pub fn change_lie2_basis(l: &StrictLie2Data, p: &[Vec<Rat>], q: &[Vec<Rat>]) -> Result<StrictLie2Data> {
    let (g, h) = (l.dim_g, l.dim_h);
    let pi = invert_rational(p).ok_or_else(|| G2Error::Invalid("singular change of basis on g".into()))?;
    let qi = invert_rational(q).ok_or_else(|| G2Error::Invalid("singular change of basis on h".into()))?;
    let mut out = StrictLie2Data::zero(h, g);
    for i in 0..g {
        for j in 0..g {
            for a in 0..g {
                for b in 0..g {
                    let w = &p[i][a] * &p[j][b];
                    if w.is_zero() {
                        continue;
                    }
                    for k in 0..g {
                        let c = &w * &l.bracket_g[a][b][k];
                        for m in 0..g {
                            out.bracket_g[i][j][m] += &c * &pi[k][m];
                        }
                    }
                }
            }
        }
        for al in 0..h {
            for a in 0..g {
                for be in 0..h {
                    let w = &p[i][a] * &q[al][be];
                    if w.is_zero() {
                        continue;
                    }
                    for ga in 0..h {
                        let c = &w * &l.act[a][be][ga];
                        for de in 0..h {
                            out.act[i][al][de] += &c * &qi[ga][de];
                        }
                    }
                }
            }
        }
    }
    for al in 0..h {
        for be in 0..h {
            for i in 0..g {
                let c = &q[al][be] * &l.delta[be][i];
                for m in 0..g {
                    out.delta[al][m] += &c * &pi[i][m];
                }
            }
        }
    }
    Ok(out)
}

/// Random strict Lie 2-algebra built from catalog entries (plus a trivial
/// module family over abelian `𝔤`) in random bases. Always valid.
pub fn random_lie2(rng: &mut impl Rng) -> Result<StrictLie2Data> {
    let l = match rng.gen_range(0..5) {
        0 => {
            let name = LIE2_NAMES.choose(rng).expect("nonempty");
            lie2(name)?
        }
        1 => {
            let g = [StructureConstants::sl2(), StructureConstants::so3(), StructureConstants::heisenberg()]
                .choose(rng)
                .expect("nonempty")
                .clone();
            StrictLie2Data::adjoint(&g, random_nonzero_rat(rng))
        }
        2 => {
            // adjoint module with δ = 0
            let g = [StructureConstants::sl2(), StructureConstants::so3()].choose(rng).expect("nonempty").clone();
            let mut l = StrictLie2Data::adjoint(&g, rat(0));
            for row in l.delta.iter_mut() {
                row.iter_mut().for_each(|x| *x = rat(0));
            }
            l
        }
        _ => {
            // abelian 𝔤, trivial action, arbitrary δ
            let (h, g) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let mut l = StrictLie2Data::zero(h, g);
            for row in l.delta.iter_mut() {
                row.iter_mut().for_each(|x| *x = random_rat(rng));
            }
            l
        }
    };
    let p = random_invertible(rng, l.dim_g);
    let q = random_invertible(rng, l.dim_h);
    change_lie2_basis(&l, &p, &q)
}

pub fn random_lie2s(n: usize, seed: u64) -> Result<Vec<StrictLie2Data>> {
    let mut rng: ChaCha8Rng = seeded_rng(seed);
    (0..n).map(|_| random_lie2(&mut rng)).collect()
}

/// Catalog group tag of an integration setup name.
pub fn setup_tag(name: &str) -> Result<GroupTag> {
    Ok(IntegrationSetup::by_name(name)?.tag())
}
