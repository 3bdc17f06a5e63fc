use super::{FiniteLattice, LatticeError, LatticeIsoTable};

/// Largest lattice accepted by the automorphism searches.
pub const MAX_AUTOMORPHISM_SIZE: usize = 512;

fn check_size(l: &FiniteLattice) -> Result<(), LatticeError> {
    if l.size() > MAX_AUTOMORPHISM_SIZE {
        Err(LatticeError::SizeExceeded { size: l.size(), limit: MAX_AUTOMORPHISM_SIZE })
    } else {
        Ok(())
    }
}

/// All order automorphisms of `l`.
///
/// Atomic lattices are searched over atom images only: an automorphism
/// permutes the atoms preserving the type function and is then determined
/// by joins. Other lattices fall back to
/// [`enumerate_automorphisms_exhaustive`].
pub fn enumerate_automorphisms(l: &FiniteLattice) -> Result<Vec<LatticeIsoTable>, LatticeError> {
    check_size(l)?;
    if !l.is_atomic() {
        return enumerate_automorphisms_exhaustive(l);
    }
    let atoms = l.atoms();
    let m = atoms.len();
    let mut types = vec![0usize; m * m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                types[i * m + j] = l.atom_type(atoms[i], atoms[j]);
            }
        }
    }
    // atoms below each element, as positions in `atoms`
    let below: Vec<Vec<usize>> = (0..l.size())
        .map(|e| (0..m).filter(|&k| l.leq(atoms[k], e)).collect())
        .collect();

    let mut found = Vec::new();
    let mut image = vec![usize::MAX; m];
    let mut used = vec![false; m];
    search_atoms(l, &atoms, &types, &below, 0, &mut image, &mut used, &mut found);
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn search_atoms(
    l: &FiniteLattice,
    atoms: &[usize],
    types: &[usize],
    below: &[Vec<usize>],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
    found: &mut Vec<LatticeIsoTable>,
) {
    let m = atoms.len();
    if depth == m {
        if let Some(table) = extend_by_joins(l, atoms, below, image) {
            found.push(table);
        }
        return;
    }
    for cand in 0..m {
        if used[cand] {
            continue;
        }
        let consistent =
            (0..depth).all(|k| types[depth * m + k] == types[cand * m + image[k]]);
        if !consistent {
            continue;
        }
        image[depth] = cand;
        used[cand] = true;
        search_atoms(l, atoms, types, below, depth + 1, image, used, found);
        used[cand] = false;
    }
    image[depth] = usize::MAX;
}

fn extend_by_joins(
    l: &FiniteLattice,
    atoms: &[usize],
    below: &[Vec<usize>],
    image: &[usize],
) -> Option<LatticeIsoTable> {
    let map: Vec<usize> = below
        .iter()
        .map(|ks| ks.iter().fold(l.bottom(), |acc, &k| l.join(acc, atoms[image[k]])))
        .collect();
    let table = LatticeIsoTable { map };
    table.validate(l, l).ok().map(|_| table)
}

/// All order automorphisms by backtracking over every element, pruning with
/// the sizes of principal up- and down-sets. Independent of atoms; kept as
/// the cross-check for [`enumerate_automorphisms`].
pub fn enumerate_automorphisms_exhaustive(
    l: &FiniteLattice,
) -> Result<Vec<LatticeIsoTable>, LatticeError> {
    check_size(l)?;
    let size = l.size();
    let signature: Vec<(u32, u32)> = (0..size).map(|i| (l.down_count(i), l.up_count(i))).collect();
    let mut image = vec![usize::MAX; size];
    let mut used = vec![false; size];
    let mut found = Vec::new();

    fn go(
        l: &FiniteLattice,
        sig: &[(u32, u32)],
        depth: usize,
        image: &mut [usize],
        used: &mut [bool],
        found: &mut Vec<LatticeIsoTable>,
    ) {
        let size = l.size();
        if depth == size {
            found.push(LatticeIsoTable { map: image.to_vec() });
            return;
        }
        for cand in 0..size {
            if used[cand] || sig[cand] != sig[depth] {
                continue;
            }
            let ok = (0..depth).all(|k| {
                l.leq(depth, k) == l.leq(cand, image[k]) && l.leq(k, depth) == l.leq(image[k], cand)
            });
            if !ok {
                continue;
            }
            image[depth] = cand;
            used[cand] = true;
            go(l, sig, depth + 1, image, used, found);
            used[cand] = false;
        }
    }

    go(l, &signature, 0, &mut image, &mut used, &mut found);
    Ok(found)
}
