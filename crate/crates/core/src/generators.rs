use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::complex::{Ambient, CellSet, Cube, CubicalComplex, SetFamily, SimplicialComplex};
use crate::config::Caps;
use crate::error::{check_cap, malformed, Error, Result};
use crate::homology::homology;
use crate::nerve::{good_cover_from_table, IntersectionTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// Axis-parallel boxes: a good cover.
    Boxes,
    /// Square rings, each with the homology of a circle.
    Annuli,
    /// Boxes with isolated open top cells removed.
    PuncturedRegions,
    /// Finite point sets as 0-dimensional subcomplexes.
    DiscreteSets,
    /// Two interlocking C-shapes whose intersection is disconnected, plus boxes.
    Adversarial,
    /// Scattered annuli followed by boxes.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prng {
    /// ChaCha8 seeded with `seed_from_u64`; a draw in [lo, hi] is
    /// `lo + next_u64() % (hi - lo + 1)`.
    #[default]
    Chacha8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnulusLayout {
    /// Common center, inner radius i + 1 for member i, shared outer radius.
    Concentric,
    /// Independent random centers and radii.
    Scattered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscretePattern {
    /// Member i is every point except i.
    ComplementSingletons,
    /// Member i is the single point i.
    Disjoint,
    /// Random non-empty subsets of a universe of points.
    Random,
}

fn default_dim() -> usize {
    2
}

/// Parameters of one generated family. Kind-specific fields are optional;
/// setting one that the kind does not use is an error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    #[serde(default = "default_dim")]
    pub dim: usize,
    /// Grid [0, extent]^dim.
    pub extent: i64,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub prng: Prng,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_side: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_side: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<AnnulusLayout>,
    /// Number of annuli in a mixed family (default: half of n).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annuli: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<DiscretePattern>,
    /// Number of points for random discrete sets (default 2n).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<usize>,
    /// Maximum holes per punctured region (default 2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holes: Option<usize>,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, dim: usize, extent: i64, n: usize, seed: u64) -> Self {
        GeneratorSpec {
            kind,
            dim,
            extent,
            n,
            seed,
            prng: Prng::Chacha8,
            min_side: None,
            max_side: None,
            layout: None,
            annuli: None,
            pattern: None,
            universe: None,
            holes: None,
        }
    }

    fn validate(&self, caps: &Caps) -> Result<()> {
        use GeneratorKind::*;
        let allowed: &[&str] = match self.kind {
            Boxes => &["min_side", "max_side"],
            Annuli => &["layout"],
            PuncturedRegions => &["min_side", "max_side", "holes"],
            DiscreteSets => &["pattern", "universe"],
            Adversarial => &["min_side", "max_side"],
            Mixed => &["min_side", "max_side", "annuli"],
        };
        let set = [
            ("min_side", self.min_side.is_some()),
            ("max_side", self.max_side.is_some()),
            ("layout", self.layout.is_some()),
            ("annuli", self.annuli.is_some()),
            ("pattern", self.pattern.is_some()),
            ("universe", self.universe.is_some()),
            ("holes", self.holes.is_some()),
        ];
        if let Some((name, _)) = set.iter().find(|(name, on)| *on && !allowed.contains(name)) {
            return Err(malformed(format!("parameter {name} does not apply to {:?}", self.kind)));
        }
        if self.kind != DiscreteSets {
            if !(1..=4).contains(&self.dim) {
                return Err(malformed(format!("grid dimension {} is not in 1..=4", self.dim)));
            }
            if self.extent < 2 {
                return Err(malformed("grid extent must be at least 2"));
            }
            check_cap("grid extent", self.extent as usize, caps.max_extent)?;
        }
        if self.n > 64 {
            return Err(malformed("at most 64 members"));
        }
        Ok(())
    }
}

struct Draw(ChaCha8Rng);

impl Draw {
    fn new(seed: u64) -> Self {
        Draw(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform-ish integer in [lo, hi].
    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as i64
    }

    fn coin(&mut self) -> bool {
        self.0.next_u64() & 1 == 1
    }
}

fn grid_ambient(dim: usize, extent: i64) -> Result<Arc<Ambient>> {
    Ok(Arc::new(Ambient::Cubical(CubicalComplex::grid(dim, extent)?)))
}

fn box_set(ambient: &Ambient, b: &[(i64, i64)]) -> Result<CellSet> {
    let cells = ambient.box_cells(b)?;
    Ok(CellSet::from_unsorted(cells.into_iter().map(|c| c as u32).collect()))
}

fn random_box(draw: &mut Draw, dim: usize, extent: i64, min_side: i64, max_side: i64) -> Vec<(i64, i64)> {
    (0..dim)
        .map(|_| {
            let side = draw.range(min_side, max_side);
            let lo = draw.range(0, extent - side);
            (lo, lo + side)
        })
        .collect()
}

fn sides(spec: &GeneratorSpec, default_min: i64, default_max: i64) -> Result<(i64, i64)> {
    let min = spec.min_side.unwrap_or(default_min);
    let max = spec.max_side.unwrap_or(default_max.max(min)).min(spec.extent);
    if min < 0 || min > max {
        return Err(Error::Infeasible(format!("side range [{min}, {max}] is empty")));
    }
    Ok((min, max))
}

/// The square ring around `center` (first two axes) between sup-norm radii
/// `r_inner` and `r_outer`: the grid squares whose centers lie in the closed
/// annulus. Further axes, if any, span `thickness`.
pub fn discretize_annulus(
    ambient: &Ambient,
    center: (i64, i64),
    r_inner: i64,
    r_outer: i64,
    thickness: &[(i64, i64)],
) -> Result<CellSet> {
    if r_inner < 1 {
        return Err(Error::Infeasible(format!("inner radius {r_inner} leaves no hole")));
    }
    if r_inner >= r_outer {
        return Err(Error::Infeasible(format!(
            "inner radius {r_inner} is not below outer radius {r_outer}"
        )));
    }
    let (x, y) = center;
    let strips = [
        [(x - r_outer, x + r_outer), (y - r_outer, y - r_inner)],
        [(x - r_outer, x + r_outer), (y + r_inner, y + r_outer)],
        [(x - r_outer, x - r_inner), (y - r_outer, y + r_outer)],
        [(x + r_inner, x + r_outer), (y - r_outer, y + r_outer)],
    ];
    let mut cells = Vec::new();
    for s in strips {
        let b: Vec<(i64, i64)> = s.iter().chain(thickness).copied().collect();
        let found = ambient
            .box_cells(&b)
            .map_err(|_| Error::Infeasible(format!("annulus around {center:?} with radius {r_outer} leaves the grid")))?;
        cells.extend(found.into_iter().map(|c| c as u32));
    }
    let ring = CellSet::from_unsorted(cells);
    let h = homology(&ring.chain_complex(ambient)?, false)?;
    if h.betti(0) != 1 || h.betti(1) != 1 || (2..h.groups.len()).any(|p| !h.is_zero_at(p)) {
        return Err(Error::Infeasible(format!("annulus has Betti numbers {:?}", h.betti_numbers())));
    }
    Ok(ring)
}

fn name(i: usize) -> String {
    format!("F{i}")
}

/// Builds the family described by `spec` and re-checks its advertised
/// regime: boxes form a homological good cover, annuli have the homology
/// of a circle, punctured regions have one (d-1)-cycle per hole.
pub fn generate(spec: &GeneratorSpec, caps: &Caps) -> Result<SetFamily> {
    spec.validate(caps)?;
    let mut draw = Draw::new(spec.seed);
    let family = match spec.kind {
        GeneratorKind::Boxes => boxes(spec, &mut draw)?,
        GeneratorKind::Annuli => annuli(spec, &mut draw)?,
        GeneratorKind::PuncturedRegions => punctured(spec, &mut draw)?,
        GeneratorKind::DiscreteSets => discrete(spec, &mut draw)?,
        GeneratorKind::Adversarial => adversarial(spec, &mut draw)?,
        GeneratorKind::Mixed => mixed(spec, &mut draw)?,
    };
    if spec.kind == GeneratorKind::Boxes {
        let table = IntersectionTable::compute(&family, &Caps { max_members: 64, ..*caps })?;
        if let Some(w) = good_cover_from_table(&table).witness {
            return Err(Error::Internal(format!("generated boxes are not a good cover: {w:?}")));
        }
    }
    Ok(family)
}

fn boxes(spec: &GeneratorSpec, draw: &mut Draw) -> Result<SetFamily> {
    let (min, max) = sides(spec, 1, (spec.extent / 2).max(1))?;
    let ambient = grid_ambient(spec.dim, spec.extent)?;
    let members = (0..spec.n)
        .map(|i| {
            let b = random_box(draw, spec.dim, spec.extent, min, max);
            Ok((name(i), box_set(&ambient, &b)?))
        })
        .collect::<Result<_>>()?;
    SetFamily::new(ambient, members)
}

fn annulus_thickness(spec: &GeneratorSpec, draw: &mut Draw) -> Vec<(i64, i64)> {
    (2..spec.dim)
        .map(|_| {
            let lo = draw.range(0, spec.extent - 1);
            (lo, draw.range(lo + 1, spec.extent))
        })
        .collect()
}

fn scattered_annulus(spec: &GeneratorSpec, ambient: &Ambient, draw: &mut Draw) -> Result<CellSet> {
    let half = spec.extent / 2;
    if half < 2 {
        return Err(Error::Infeasible("grid too small for an annulus".into()));
    }
    let r_out = draw.range(2, half);
    let r_in = draw.range(1, r_out - 1);
    let cx = draw.range(r_out, spec.extent - r_out);
    let cy = draw.range(r_out, spec.extent - r_out);
    let thickness = annulus_thickness(spec, draw);
    discretize_annulus(ambient, (cx, cy), r_in, r_out, &thickness)
}

fn annuli(spec: &GeneratorSpec, draw: &mut Draw) -> Result<SetFamily> {
    if spec.dim < 2 {
        return Err(Error::Infeasible("annuli need at least two dimensions".into()));
    }
    let ambient = grid_ambient(spec.dim, spec.extent)?;
    let members = match spec.layout.unwrap_or(AnnulusLayout::Concentric) {
        AnnulusLayout::Concentric => {
            let c = spec.extent / 2;
            let r_out = c.min(spec.extent - c);
            if spec.n as i64 >= r_out {
                return Err(Error::Infeasible(format!(
                    "{} concentric annuli need an outer radius above {}, the grid allows {r_out}",
                    spec.n, spec.n
                )));
            }
            let thickness: Vec<(i64, i64)> = (2..spec.dim).map(|_| (0, spec.extent)).collect();
            (0..spec.n)
                .map(|i| Ok((name(i), discretize_annulus(&ambient, (c, c), i as i64 + 1, r_out, &thickness)?)))
                .collect::<Result<_>>()?
        }
        AnnulusLayout::Scattered => (0..spec.n)
            .map(|i| Ok((name(i), scattered_annulus(spec, &ambient, draw)?)))
            .collect::<Result<_>>()?,
    };
    SetFamily::new(ambient, members)
}

fn punctured(spec: &GeneratorSpec, draw: &mut Draw) -> Result<SetFamily> {
    let (min, max) = sides(spec, 3, spec.extent)?;
    if min < 3 {
        return Err(Error::Infeasible("punctured regions need sides of at least 3".into()));
    }
    let max_holes = spec.holes.unwrap_or(2);
    let ambient = grid_ambient(spec.dim, spec.extent)?;
    let mut members = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let b = random_box(draw, spec.dim, spec.extent, min, max);
        // candidate holes: unit cubes at odd offsets from the lower corner,
        // away from the boundary, so no two holes touch
        let slots: Vec<Vec<i64>> = b.iter().map(|&(lo, hi)| (lo + 1..hi - 1).step_by(2).collect()).collect();
        let mut positions = vec![Vec::new()];
        for axis in &slots {
            positions = positions
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    axis.iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        let holes = draw.range(1, max_holes.max(1) as i64) as usize;
        let mut removed = Vec::new();
        for _ in 0..holes.min(positions.len()) {
            let k = draw.range(0, positions.len() as i64 - 1) as usize;
            removed.push(positions.swap_remove(k));
        }
        let mut cells: Vec<usize> = ambient.box_cells(&b)?;
        for h in &removed {
            let iv: Vec<(i64, i64)> = h.iter().map(|&x| (x, x + 1)).collect();
            let top = ambient
                .cube_index(&Cube::from_intervals(&iv)?)
                .ok_or_else(|| Error::Internal("hole outside the grid".into()))?;
            cells.retain(|&c| c != top);
        }
        let set = CellSet::from_unsorted(cells.into_iter().map(|c| c as u32).collect());
        let h = homology(&set.chain_complex(&ambient)?, false)?;
        let expected_top = spec.dim.saturating_sub(1);
        if h.betti(0) != 1 || (spec.dim >= 2 && h.betti(expected_top) != removed.len()) {
            return Err(Error::Internal(format!(
                "punctured region has Betti numbers {:?} for {} holes",
                h.betti_numbers(),
                removed.len()
            )));
        }
        members.push((name(i), set));
    }
    SetFamily::new(ambient, members)
}

fn discrete(spec: &GeneratorSpec, draw: &mut Draw) -> Result<SetFamily> {
    let n = spec.n;
    let pattern = spec.pattern.unwrap_or(DiscretePattern::ComplementSingletons);
    let universe = match pattern {
        DiscretePattern::ComplementSingletons | DiscretePattern::Disjoint => n,
        DiscretePattern::Random => spec.universe.unwrap_or(2 * n).max(1),
    };
    if pattern == DiscretePattern::ComplementSingletons && n < 2 {
        return Err(Error::Infeasible("complement singletons need n >= 2".into()));
    }
    let points = SimplicialComplex::from_facets((0..universe as i64).map(|v| vec![v]))?;
    let ambient = Arc::new(Ambient::Simplicial(points));
    let point = |v: usize| ambient.simplex_cells(&[v as i64]).map(|c| c[0] as u32);
    let mut members = Vec::with_capacity(n);
    for i in 0..n {
        let pts: Vec<usize> = match pattern {
            DiscretePattern::ComplementSingletons => (0..n).filter(|&v| v != i).collect(),
            DiscretePattern::Disjoint => vec![i],
            DiscretePattern::Random => {
                let mut pts: Vec<usize> = (0..universe).filter(|_| draw.coin()).collect();
                if pts.is_empty() {
                    pts.push(draw.range(0, universe as i64 - 1) as usize);
                }
                pts
            }
        };
        let cells = pts.into_iter().map(point).collect::<Result<Vec<_>>>()?;
        members.push((name(i), CellSet::from_unsorted(cells)));
    }
    SetFamily::new(ambient, members)
}

/// Left and right C-shapes of width `w` and height `h`; their intersection
/// is the bottom bar plus the top bar, two components.
fn c_shapes(ambient: &Ambient, w: i64, h: i64, rest: &[(i64, i64)]) -> Result<(CellSet, CellSet)> {
    let with_rest = |b: [(i64, i64); 2]| -> Vec<(i64, i64)> { b.iter().chain(rest).copied().collect() };
    let bottom = with_rest([(0, w), (0, 1)]);
    let top = with_rest([(0, w), (h - 1, h)]);
    let left = with_rest([(0, 1), (0, h)]);
    let right = with_rest([(w - 1, w), (0, h)]);
    let union = |parts: [&Vec<(i64, i64)>; 3]| -> Result<CellSet> {
        let mut cells = Vec::new();
        for p in parts {
            cells.extend(ambient.box_cells(p)?.into_iter().map(|c| c as u32));
        }
        Ok(CellSet::from_unsorted(cells))
    };
    Ok((union([&bottom, &top, &left])?, union([&bottom, &top, &right])?))
}

fn adversarial(spec: &GeneratorSpec, draw: &mut Draw) -> Result<SetFamily> {
    if spec.dim < 2 || spec.extent < 4 || spec.n < 2 {
        return Err(Error::Infeasible(
            "adversarial families need dimension >= 2, extent >= 4 and n >= 2".into(),
        ));
    }
    let ambient = grid_ambient(spec.dim, spec.extent)?;
    let w = draw.range(3, spec.extent);
    let h = draw.range(3, spec.extent);
    let rest: Vec<(i64, i64)> = (2..spec.dim).map(|_| (0, spec.extent)).collect();
    let (a, b) = c_shapes(&ambient, w, h, &rest)?;
    let (min, max) = sides(spec, 1, (spec.extent / 2).max(1))?;
    let mut members = vec![(name(0), a), (name(1), b)];
    for i in 2..spec.n {
        let bx = random_box(draw, spec.dim, spec.extent, min, max);
        members.push((name(i), box_set(&ambient, &bx)?));
    }
    SetFamily::new(ambient, members)
}

fn mixed(spec: &GeneratorSpec, draw: &mut Draw) -> Result<SetFamily> {
    if spec.dim < 2 {
        return Err(Error::Infeasible("mixed families need at least two dimensions".into()));
    }
    let count = spec.annuli.unwrap_or(spec.n / 2).min(spec.n);
    let ambient = grid_ambient(spec.dim, spec.extent)?;
    let (min, max) = sides(spec, 1, (spec.extent / 2).max(1))?;
    let mut members = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let set = if i < count {
            scattered_annulus(spec, &ambient, draw)?
        } else {
            box_set(&ambient, &random_box(draw, spec.dim, spec.extent, min, max))?
        };
        members.push((name(i), set));
    }
    SetFamily::new(ambient, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::family_to_json;

    #[test]
    fn same_seed_same_family() {
        for kind in [
            GeneratorKind::Boxes,
            GeneratorKind::Annuli,
            GeneratorKind::PuncturedRegions,
            GeneratorKind::DiscreteSets,
            GeneratorKind::Adversarial,
            GeneratorKind::Mixed,
        ] {
            let mut spec = GeneratorSpec::new(kind, 2, 10, 3, 11);
            if kind == GeneratorKind::DiscreteSets {
                spec.pattern = Some(DiscretePattern::Random);
            }
            let a = generate(&spec, &Caps::default()).unwrap();
            let b = generate(&spec, &Caps::default()).unwrap();
            assert_eq!(family_to_json(&a), family_to_json(&b), "{kind:?}");
        }
    }

    #[test]
    fn unused_parameters_rejected() {
        let mut spec = GeneratorSpec::new(GeneratorKind::Boxes, 2, 8, 3, 1);
        spec.layout = Some(AnnulusLayout::Scattered);
        assert!(generate(&spec, &Caps::default()).is_err());
    }

    #[test]
    fn annulus_radii() {
        let ambient = Ambient::Cubical(CubicalComplex::grid(2, 16).unwrap());
        assert!(discretize_annulus(&ambient, (8, 8), 1, 3, &[]).is_ok());
        assert!(discretize_annulus(&ambient, (8, 8), 1, 8, &[]).is_ok());
        assert!(matches!(discretize_annulus(&ambient, (8, 8), 3, 3, &[]), Err(Error::Infeasible(_))));
        assert!(matches!(discretize_annulus(&ambient, (8, 8), 0, 3, &[]), Err(Error::Infeasible(_))));
        assert!(matches!(discretize_annulus(&ambient, (2, 2), 1, 3, &[]), Err(Error::Infeasible(_))));
    }

    #[test]
    fn too_many_concentric_annuli() {
        let spec = GeneratorSpec::new(GeneratorKind::Annuli, 2, 6, 3, 0);
        assert!(matches!(generate(&spec, &Caps::default()), Err(Error::Infeasible(_))));
    }
}
