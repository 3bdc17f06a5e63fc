use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use sigmalab_core::galois::{self, CensusMode, GaloisError};
use sigmalab_core::hartmanis::{build_table, reconstruct_bijection, HartmanisError};
use sigmalab_core::lattice::{
    build_lattice, enumerate_automorphisms, enumerate_automorphisms_exhaustive, table_one_allows,
    type_of, AtomClass, AtomProfile,
};
use sigmalab_core::linear::LinearError;
use sigmalab_core::projective::{
    ftpg_reconstruct, induced_subspace_iso, tau_table_from_semilinear, theorem_c_pipeline,
    ProjectiveError, TauIsoTable,
};
use sigmalab_core::rigidity::{end_to_end_theorem_a, theorem_b_group, RigidityError};
use sigmalab_core::topology::{count_topologies, enumerate_topologies, TopologyError};
use sigmalab_core::{
    Bijection, FieldAut, FinTopology, FiniteField, LatticeIsoTable, Matrix, SemilinearMap,
    SigmaLattice, SubspaceIsoTable, SubspaceLattice, TauLattice, VectorSpace, VectorTopology,
};

use crate::report::{input, violation, Failure, RunReport};
use crate::{GenTable, MapArgs, Mode, SpaceArgs};

type Outcome = Result<Option<RunReport>, Failure>;

/// `|Σ(n)|` for the sizes a table file may have.
const SIGMA_SIZES: [usize; 5] = [1, 4, 29, 355, 6942];
const MAX_DOT_NODES: usize = 2048;
const MAX_TYPE_TABLE_POINTS: usize = 10;

impl From<TopologyError> for Failure {
    fn from(e: TopologyError) -> Self {
        input(e)
    }
}

impl From<LinearError> for Failure {
    fn from(e: LinearError) -> Self {
        input(e)
    }
}

impl From<GaloisError> for Failure {
    fn from(e: GaloisError) -> Self {
        match e {
            GaloisError::NotASubspace(_) => violation(e),
            _ => input(e),
        }
    }
}

impl From<HartmanisError> for Failure {
    fn from(e: HartmanisError) -> Self {
        match e {
            HartmanisError::NoConsistentBijection => violation(e),
            _ => input(e),
        }
    }
}

impl From<RigidityError> for Failure {
    fn from(e: RigidityError) -> Self {
        match e {
            RigidityError::NotSemiaffine(_) => violation(e),
            RigidityError::Hartmanis(h) => h.into(),
            RigidityError::Galois(g) => g.into(),
            _ => input(e),
        }
    }
}

impl From<ProjectiveError> for Failure {
    fn from(e: ProjectiveError) -> Self {
        match e {
            ProjectiveError::NotInducible(_)
            | ProjectiveError::HausdorffNotPreserved
            | ProjectiveError::GradeViolation { .. } => violation(e),
            ProjectiveError::Galois(g) => g.into(),
            _ => input(e),
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let file = File::open(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) if p == Path::new("-") => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => {
            let f = File::create(p).map_err(|e| input(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

fn io_err(e: io::Error) -> Failure {
    input(e)
}

fn space(args: SpaceArgs) -> Result<VectorSpace, Failure> {
    let (p, k) = args.field;
    let field = FiniteField::new(p, k).map_err(input)?;
    Ok(VectorSpace::new(field, args.dim)?)
}

fn space_params(args: SpaceArgs) -> serde_json::Value {
    json!({ "field": [args.field.0, args.field.1], "dim": args.dim })
}

pub fn count_top(n: usize, allow_large: bool) -> Outcome {
    let count = count_topologies(n, allow_large)?;
    Ok(Some(RunReport::new("count-top", json!({ "n": n })).count("topologies", count).result(count)?))
}

pub fn enum_top(n: usize, out: &Path, allow_large: bool) -> Outcome {
    let stream = enumerate_topologies(n, allow_large)?;
    let mut w = writer(Some(out))?;
    let mut count = 0u64;
    for t in stream {
        serde_json::to_writer(&mut w, &t).map_err(input)?;
        w.write_all(b"\n").map_err(io_err)?;
        count += 1;
    }
    w.flush().map_err(io_err)?;
    drop(w);
    if out == Path::new("-") {
        // stdout carries the stream
        return Ok(None);
    }
    let params = json!({ "n": n, "out": out.display().to_string() });
    Ok(Some(RunReport::new("enum-top", params).count("topologies", count)))
}

#[derive(Serialize)]
struct TypeCell {
    classes: [AtomClass; 2],
    pairs: u64,
    realized: BTreeSet<u32>,
    allowed: Vec<u32>,
}

pub fn type_table(n: usize) -> Outcome {
    if !(3..=MAX_TYPE_TABLE_POINTS).contains(&n) {
        return Err(input(format!("type-table needs 3 <= n <= {MAX_TYPE_TABLE_POINTS}")));
    }
    let atoms = AtomProfile::all(n);
    let classes = [AtomClass::N, AtomClass::M, AtomClass::L];
    let mut cells: BTreeMap<(AtomClass, AtomClass), (u64, BTreeSet<u32>)> = BTreeMap::new();
    let mut l_with_four = 0u64;
    let mut l_total = 0u64;
    for (i, p) in atoms.iter().enumerate() {
        let mut four = false;
        for (j, q) in atoms.iter().enumerate() {
            if i == j {
                continue;
            }
            let t = type_of(p, q).expect("distinct atoms");
            four |= t == 4;
            if p.klass <= q.klass {
                let cell = cells.entry((p.klass, q.klass)).or_default();
                cell.0 += 1;
                cell.1.insert(t);
            }
        }
        if p.klass == AtomClass::L {
            l_total += 1;
            l_with_four += four as u64;
        }
    }
    let mut pass = l_with_four == l_total;
    let mut rows = Vec::new();
    for (a, &p) in classes.iter().enumerate() {
        for &q in &classes[a..] {
            let (pairs, realized) = cells.remove(&(p, q)).unwrap_or_default();
            let allowed: Vec<u32> = (1..=4).filter(|&t| table_one_allows(p, q, t)).collect();
            pass &= realized.iter().all(|t| allowed.contains(t));
            rows.push(TypeCell { classes: [p, q], pairs, realized, allowed });
        }
    }
    Ok(Some(
        RunReport::new("type-table", json!({ "n": n }))
            .count("atoms", atoms.len())
            .count("l_atoms", l_total)
            .count("l_atoms_with_type_4_partner", l_with_four)
            .result(rows)?
            .pass(pass),
    ))
}

fn permutations(n: usize) -> Vec<Bijection> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Bijection::new(cur.clone()).expect("permutation"));
        let Some(i) = cur.windows(2).rposition(|w| w[0] < w[1]) else { break };
        let j = cur.iter().rposition(|&x| x > cur[i]).expect("larger successor");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

pub fn aut_sigma(n: usize) -> Outcome {
    if !(1..=4).contains(&n) {
        return Err(input("aut-sigma supports 1 <= n <= 4"));
    }
    let sigma = SigmaLattice::new(n)?;
    let lattice = sigma.lattice().map_err(input)?;
    let found = enumerate_automorphisms(&lattice).map_err(input)?;
    let found_set: HashSet<&LatticeIsoTable> = found.iter().collect();
    let mut induced = HashSet::new();
    for theta in permutations(n) {
        for flag in [false, true] {
            induced.insert(build_table(&sigma, &theta, flag)?);
        }
    }
    let induced_set: HashSet<&LatticeIsoTable> = induced.iter().collect();
    let mut pass = found_set == induced_set && found_set.len() == found.len();
    let mut report = RunReport::new("aut-sigma", json!({ "n": n }))
        .count("sigma_size", sigma.len())
        .count("automorphisms", found.len())
        .count("induced_maps", induced.len());
    if n <= 3 {
        let exhaustive = enumerate_automorphisms_exhaustive(&lattice).map_err(input)?;
        let exhaustive_set: HashSet<&LatticeIsoTable> = exhaustive.iter().collect();
        pass &= exhaustive_set == found_set;
        report = report.count("automorphisms_exhaustive_search", exhaustive.len());
    }
    Ok(Some(report.result(json!({ "all_induced": found_set == induced_set }))?.pass(pass)))
}

pub fn hartmanis(path: &Path) -> Outcome {
    let table: LatticeIsoTable = read_json(path)?;
    let n = SIGMA_SIZES
        .iter()
        .position(|&s| s == table.size())
        .map(|i| i + 1)
        .ok_or_else(|| input(format!("{} entries is not |Σ(n)| for n <= 5", table.size())))?;
    let sigma = SigmaLattice::new(n)?;
    let result = reconstruct_bijection(&table, &sigma)?;
    Ok(Some(
        RunReport::new("hartmanis", json!({ "table": path.display().to_string() }))
            .count("n", n)
            .count("sigma_size", sigma.len())
            .result(result)?,
    ))
}

pub fn vt_census(args: SpaceArgs, mode: Mode, counts_only: bool) -> Outcome {
    let s = space(args)?;
    let image = galois::enumerate_vector_topologies(&s, CensusMode::Image)?;
    let (listed, pass, mode_name) = match mode {
        Mode::Census => {
            let census = galois::enumerate_vector_topologies(&s, CensusMode::Census)?;
            let a: HashSet<&FinTopology> = census.iter().collect();
            let b: HashSet<&FinTopology> = image.iter().collect();
            let pass = a == b;
            (census, pass, "census")
        }
        Mode::Image => {
            let pass = image.iter().all(|t| galois::is_vector_topology(&s, t));
            (image, pass, "image")
        }
    };
    let mut params = space_params(args);
    params["mode"] = json!(mode_name);
    let by_dim: BTreeMap<String, usize> = s.enumerate_subspaces().iter().fold(BTreeMap::new(), |mut m, sub| {
        *m.entry(sub.dim().to_string()).or_default() += 1;
        m
    });
    let mut report = RunReport::new("vt-census", params)
        .count("vector_topologies", listed.len())
        .count("ground_points", s.size());
    if counts_only {
        report = report.result(json!({ "by_subspace_dim": by_dim }))?;
    } else {
        let list: Vec<VectorTopology> =
            listed.into_iter().map(|t| VectorTopology { space: s.spec(), topology: t }).collect();
        report = report.result(json!({ "by_subspace_dim": by_dim, "topologies": list }))?;
    }
    Ok(Some(report.pass(pass)))
}

pub fn galois_verify(args: SpaceArgs) -> Outcome {
    let s = space(args)?;
    let r = galois::verify_galois(&s)?;
    Ok(Some(
        RunReport::new("galois-verify", space_params(args))
            .count("subspaces", r.subspaces)
            .count("vector_topologies", r.vector_topologies)
            .pass(r.pass)
            .result(r)?,
    ))
}

pub fn theorem_b(args: SpaceArgs, seed: u64) -> Outcome {
    let s = space(args)?;
    let tau = TauLattice::new(&s)?;
    let r = theorem_b_group(&tau, seed)?;
    let mut report = RunReport::new("theorem-b", space_params(args)).seed(seed);
    if let Some(c) = r.census {
        report = report.count("census", c);
    }
    Ok(Some(
        report
            .count("expected", r.expected as u64)
            .count("group_order", r.group_order as u64)
            .pass(r.pass)
            .result(r)?,
    ))
}

pub fn theorem_a(seed: u64, trials: usize) -> Outcome {
    let r = end_to_end_theorem_a(seed, trials)?;
    Ok(Some(
        RunReport::new("theorem-a-e2e", json!({ "trials": trials }))
            .seed(seed)
            .count("recovered", r.recovered)
            .count("tau_preserved", r.tau_preserved)
            .count("with_complement", r.with_complement)
            .pass(r.pass)
            .result(r)?,
    ))
}

pub fn ftpg(path: &Path) -> Outcome {
    let table: SubspaceIsoTable = read_json(path)?;
    if table.source() != table.target() {
        return Err(input("source and target spaces differ"));
    }
    let lattice = SubspaceLattice::new(&VectorSpace::from_spec(table.source())?);
    let (psi, phi) = ftpg_reconstruct(&lattice, &table)?;
    let reinduced = induced_subspace_iso(&lattice, &phi)? == table;
    Ok(Some(
        RunReport::new("ftpg", json!({ "table": path.display().to_string() }))
            .count("subspaces", table.len())
            .pass(reinduced)
            .result(json!({ "psi": psi, "matrix": phi.matrix, "induces_table": reinduced }))?,
    ))
}

pub fn theorem_c(path: &Path, hausdorff_check: bool) -> Outcome {
    let tt: TauIsoTable = read_json(path)?;
    let s = VectorSpace::from_spec(tt.space)?;
    let tau = TauLattice::new(&s)?;
    let lattice = build_lattice(tau.topologies(), |a, b| a.is_weaker_or_equal(b)).map_err(input)?;
    tt.table.validate(&lattice, &lattice).map_err(input)?;
    let r = theorem_c_pipeline(&tau, &tt.table, hausdorff_check)?;
    Ok(Some(
        RunReport::new(
            "theorem-c",
            json!({ "table": path.display().to_string(), "hausdorff_check": hausdorff_check }),
        )
        .count("vector_topologies", tau.len())
        .count("source_dim", r.source_dim)
        .count("target_dim", r.target_dim)
        .pass(r.pass)
        .result(r)?,
    ))
}

pub fn export_dot(path: &Path, out: Option<&Path>) -> Outcome {
    let file = File::open(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let mut nodes: Vec<FinTopology> = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let t: FinTopology =
            serde_json::from_str(&line).map_err(|e| input(format!("line {}: {e}", i + 1)))?;
        nodes.push(t);
        if nodes.len() > MAX_DOT_NODES {
            return Err(input(format!("more than {MAX_DOT_NODES} topologies")));
        }
    }
    let m = nodes.len();
    let below: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| i != j && nodes[i].is_weaker_or_equal(&nodes[j])).collect())
        .collect();
    let mut w = writer(out)?;
    let mut edges = 0u64;
    writeln!(w, "digraph sigma {{\n  rankdir=BT;").map_err(io_err)?;
    for (i, t) in nodes.iter().enumerate() {
        writeln!(w, "  t{i} [label=\"{}\"];", t.open_count()).map_err(io_err)?;
    }
    for i in 0..m {
        for j in 0..m {
            if below[i][j] && !(0..m).any(|k| below[i][k] && below[k][j]) {
                writeln!(w, "  t{i} -> t{j};").map_err(io_err)?;
                edges += 1;
            }
        }
    }
    writeln!(w, "}}").map_err(io_err)?;
    w.flush().map_err(io_err)?;
    if out.is_none() {
        // stdout carries the diagram
        return Ok(None);
    }
    Ok(Some(
        RunReport::new("export-dot", json!({ "input": path.display().to_string() }))
            .count("nodes", m)
            .count("covers", edges),
    ))
}

fn semilinear(args: &MapArgs) -> Result<(VectorSpace, SemilinearMap), Failure> {
    let s = space(args.space)?;
    let matrix = match &args.matrix {
        None => Matrix::identity(s.dim()),
        Some(text) => {
            let rows = text
                .split(';')
                .map(|r| {
                    r.split(',')
                        .map(|x| x.trim().parse::<u8>().map_err(|_| input(format!("bad entry {x:?}"))))
                        .collect::<Result<Vec<u8>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            if rows.iter().flatten().any(|&c| c as usize >= s.field().q()) {
                return Err(input("matrix entry outside the field"));
            }
            Matrix::from_rows(rows)?
        }
    };
    if matrix.dim() != s.dim() {
        return Err(input("matrix size does not match the dimension"));
    }
    if args.frobenius >= s.field().k() {
        return Err(input(format!("Frobenius exponent must be below {}", s.field().k())));
    }
    let phi = SemilinearMap::new(s.field(), FieldAut::frobenius(args.frobenius), matrix)?;
    Ok((s, phi))
}

pub fn gen_table(kind: GenTable) -> Outcome {
    let text = match kind {
        GenTable::Sigma { theta, complement } => {
            let theta = Bijection::new(theta)?;
            if theta.n() > SIGMA_SIZES.len() {
                return Err(input("tables are limited to n <= 5"));
            }
            let sigma = SigmaLattice::new(theta.n())?;
            serde_json::to_string(&build_table(&sigma, &theta, complement)?)
        }
        GenTable::Subspace { map } => {
            let (s, phi) = semilinear(&map)?;
            serde_json::to_string(&induced_subspace_iso(&SubspaceLattice::new(&s), &phi)?)
        }
        GenTable::Tau { map } => {
            let (s, phi) = semilinear(&map)?;
            serde_json::to_string(&tau_table_from_semilinear(&TauLattice::new(&s)?, &phi)?)
        }
    };
    crate::report::emit(&text.map_err(input)?);
    Ok(None)
}
