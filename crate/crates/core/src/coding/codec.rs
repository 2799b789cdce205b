use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coding::field::Field;
use crate::coding::linalg::solve;
use crate::coding::mds::CodingMatrix;
use crate::coloring::{Coloring, ColoringOutcome};
use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::model::PacketId;

/// Payloads of every packet of every file, `symbols` field elements each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacketStore<F> {
    m: usize,
    packets: usize,
    symbols: usize,
    data: Vec<F>,
}

impl<F: Field> PacketStore<F> {
    pub fn zeros(m: usize, packets: usize, symbols: usize) -> Self {
        PacketStore {
            m,
            packets,
            symbols,
            data: vec![F::ZERO; m * packets * symbols],
        }
    }

    pub fn random(m: usize, packets: usize, symbols: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..m * packets * symbols).map(|_| F::random(&mut rng)).collect();
        PacketStore {
            m,
            packets,
            symbols,
            data,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn packets(&self) -> usize {
        self.packets
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn get(&self, p: PacketId) -> &[F] {
        self.global(p.global(self.packets))
    }

    pub fn set(&mut self, p: PacketId, payload: &[F]) {
        assert_eq!(payload.len(), self.symbols, "payload length");
        let at = p.global(self.packets) * self.symbols;
        self.data[at..at + self.symbols].copy_from_slice(payload);
    }

    fn global(&self, id: usize) -> &[F] {
        &self.data[id * self.symbols..(id + 1) * self.symbols]
    }

    fn check_covers(&self, g: &ConflictGraph) -> Result<()> {
        let max_file = g.vertices().iter().map(|v| v.packet.file as usize + 1).max();
        if g.packets_per_file() != self.packets || max_file.is_some_and(|f| f > self.m) {
            return Err(Error::DimensionMismatch(format!(
                "payload store is {} files x {} packets, graph needs B = {} and {} files",
                self.m,
                self.packets,
                g.packets_per_file(),
                max_file.unwrap_or(0)
            )));
        }
        Ok(())
    }
}

/// `nu` rows of `symbols` field elements, one row per transmission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword<F> {
    nu: usize,
    symbols: usize,
    data: Vec<F>,
}

impl<F: Field> Codeword<F> {
    pub fn from_rows(rows: Vec<Vec<F>>, symbols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != symbols) {
            return Err(Error::DimensionMismatch("ragged codeword rows".into()));
        }
        Ok(Codeword {
            nu: rows.len(),
            symbols,
            data: rows.concat(),
        })
    }

    pub(crate) fn from_flat(nu: usize, symbols: usize, data: Vec<F>) -> Self {
        debug_assert_eq!(data.len(), nu * symbols);
        Codeword { nu, symbols, data }
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.symbols..(r + 1) * self.symbols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[F]> {
        (0..self.nu).map(|r| self.row(r))
    }

    pub(crate) fn data(&self) -> &[F] {
        &self.data
    }
}

// Distinct (color, global packet) pairs; each is one term of the codeword.
fn terms(g: &ConflictGraph, coloring: &Coloring) -> Vec<(u32, usize)> {
    let mut t: Vec<(u32, usize)> = (0..g.len() as u32)
        .map(|v| (coloring.color(v), g.global_packet(v)))
        .collect();
    t.sort_unstable();
    t.dedup();
    t
}

fn check_shapes<F: Field>(g: &ConflictGraph, outcome: &ColoringOutcome, gm: &CodingMatrix<F>) -> Result<()> {
    if outcome.coloring.len() != g.len() {
        return Err(Error::DimensionMismatch(format!(
            "coloring covers {} vertices, graph has {}",
            outcome.coloring.len(),
            g.len()
        )));
    }
    if gm.chi() != outcome.num_colors() || gm.nu() != outcome.local_number {
        return Err(Error::DimensionMismatch(format!(
            "generator is {}x{}, coloring needs {}x{}",
            gm.nu(),
            gm.chi(),
            outcome.local_number,
            outcome.num_colors()
        )));
    }
    Ok(())
}

/// Computes `X = G w`, where `w_c` sums the distinct packets of color `c`.
pub fn encode<F: Field>(
    g: &ConflictGraph,
    outcome: &ColoringOutcome,
    gm: &CodingMatrix<F>,
    payloads: &PacketStore<F>,
) -> Result<Codeword<F>> {
    check_shapes(g, outcome, gm)?;
    payloads.check_covers(g)?;
    let nu = gm.nu();
    let symbols = payloads.symbols();
    let mut data = vec![F::ZERO; nu * symbols];
    for (c, p) in terms(g, &outcome.coloring) {
        let payload = payloads.global(p);
        for r in 0..nu {
            let coef = gm.get(r, c as usize);
            if coef.is_zero() {
                continue;
            }
            let row = &mut data[r * symbols..(r + 1) * symbols];
            for (x, &y) in row.iter_mut().zip(payload) {
                *x += coef * y;
            }
        }
    }
    Ok(Codeword::from_flat(nu, symbols, data))
}

/// Recovers the packets requested by `user`, in the order of its vertices.
///
/// Only payloads of packets cached by `user` are read from `cache`.
pub fn decode<F: Field>(
    user: usize,
    codeword: &Codeword<F>,
    gm: &CodingMatrix<F>,
    outcome: &ColoringOutcome,
    g: &ConflictGraph,
    cache: &PacketStore<F>,
) -> Result<Vec<(PacketId, Vec<F>)>> {
    check_shapes(g, outcome, gm)?;
    cache.check_covers(g)?;
    if user >= g.n_users() {
        return Err(Error::input(format!("user {user} out of range")));
    }
    if codeword.nu() != gm.nu() || codeword.symbols() != cache.symbols() {
        return Err(Error::DimensionMismatch(format!(
            "codeword is {}x{}, expected {}x{}",
            codeword.nu(),
            codeword.symbols(),
            gm.nu(),
            cache.symbols()
        )));
    }
    let own = g.user_vertices(user);
    if own.is_empty() {
        return Ok(Vec::new());
    }
    let nu = gm.nu();
    let symbols = codeword.symbols();
    let fail = |reason: String| Error::DecodeFailure { user, reason };

    let mut residual: Vec<Vec<F>> = codeword.rows().map(<[F]>::to_vec).collect();
    let mut unknown: Vec<(u32, usize)> = Vec::new();
    for (c, p) in terms(g, &outcome.coloring) {
        if !g.user_caches_global(user, p) {
            unknown.push((c, p));
            continue;
        }
        let payload = cache.global(p);
        for (r, row) in residual.iter_mut().enumerate() {
            let coef = gm.get(r, c as usize);
            for (x, &y) in row.iter_mut().zip(payload) {
                *x -= coef * y;
            }
        }
    }
    let mut colors: Vec<u32> = unknown.iter().map(|&(c, _)| c).collect();
    colors.dedup();

    let system = |cols: &[Vec<F>]| -> Vec<Vec<F>> {
        (0..nu).map(|r| cols.iter().map(|col| col[r]).collect()).collect()
    };

    let mut out = Vec::with_capacity(own.len());
    if colors.len() <= nu {
        // Every unknown color fits: solve for all color sums at once. The sum
        // for a requested vertex's own color is exactly its packet.
        let cols: Vec<Vec<F>> = colors.iter().map(|&c| gm.column(c as usize)).collect();
        let sums = solve(system(&cols), residual)
            .ok_or_else(|| fail(format!("{} unknown colors are dependent", colors.len())))?;
        for v in own {
            let c = outcome.coloring.color(v);
            let p = g.global_packet(v);
            let at = colors.binary_search(&c).expect("own color is unknown");
            if unknown.iter().any(|&(c2, p2)| c2 == c && p2 != p) {
                return Err(fail(format!(
                    "color {c} mixes vertex {v} with an uncached packet"
                )));
            }
            out.push((g.packet(v), sums[at].clone()));
        }
        return Ok(out);
    }

    // Per requested packet: colors carrying other unknown packets are unknown
    // sums; the remaining colors carrying this packet collapse into one column.
    for v in own {
        let p = g.global_packet(v);
        let mut others: Vec<u32> = unknown
            .iter()
            .filter(|&&(_, q)| q != p)
            .map(|&(c, _)| c)
            .collect();
        others.dedup();
        let mut merged = vec![F::ZERO; nu];
        for &(c, _) in unknown
            .iter()
            .filter(|&&(c, q)| q == p && others.binary_search(&c).is_err())
        {
            for (r, x) in merged.iter_mut().enumerate() {
                *x += gm.get(r, c as usize);
            }
        }
        let mut cols: Vec<Vec<F>> = others.iter().map(|&c| gm.column(c as usize)).collect();
        cols.push(merged);
        if cols.len() > nu {
            return Err(fail(format!(
                "vertex {v} sees {} unknown columns, only {nu} transmissions",
                cols.len()
            )));
        }
        let mut sol = solve(system(&cols), residual.clone())
            .ok_or_else(|| fail(format!("system for vertex {v} is singular")))?;
        let payload = sol.pop().expect("packet column");
        debug_assert_eq!(payload.len(), symbols);
        out.push((g.packet(v), payload));
    }
    Ok(out)
}

/// Encodes with `payloads` and checks that every user recovers every
/// requested packet exactly. Users see only their cached payloads.
pub fn verify_round_trip<F: Field>(
    g: &ConflictGraph,
    outcome: &ColoringOutcome,
    gm: &CodingMatrix<F>,
    payloads: &PacketStore<F>,
) -> Result<()> {
    let x = encode(g, outcome, gm, payloads)?;
    for u in 0..g.n_users() {
        for (p, got) in decode(u, &x, gm, outcome, g, payloads)? {
            if got != payloads.get(p) {
                return Err(Error::DecodeFailure {
                    user: u,
                    reason: format!("packet {p} decoded to the wrong payload"),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::field::{Gf256, Gf65536};
    use crate::coding::mds::mds_generator;
    use crate::coloring::{gclc, gclc2, hglc, Grouping, HglcParams};
    use crate::instances::{example_one, random_small_instance};
    use crate::model::{CacheRealization, DemandRealization};

    fn outcome(g: &ConflictGraph, colors: Vec<u32>) -> ColoringOutcome {
        let coloring = Coloring::new(colors);
        ColoringOutcome::evaluate(g, coloring, crate::coloring::Algorithm::Gclc2)
    }

    #[test]
    fn example_one_transmissions() {
        let (cache, demand) = example_one();
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        // Vertices: A2@0, A3@0, A1@1, A3@1, B1@2, B2@2. A1 takes the parity column.
        let out = outcome(&g, vec![0, 1, 4, 1, 2, 3]);
        assert_eq!((out.num_colors(), out.local_number), (5, 4));
        let gm: CodingMatrix<Gf256> = mds_generator(5, 4).unwrap();
        let store = PacketStore::<Gf256>::random(2, 3, 8, 1);
        let x = encode(&g, &out, &gm, &store).unwrap();
        let a = |i| store.get(PacketId::new(0, i));
        let b = |i| store.get(PacketId::new(1, i));
        let xor =
            |p: &[Gf256], q: &[Gf256]| -> Vec<Gf256> { p.iter().zip(q).map(|(&s, &t)| s + t).collect() };
        let expected = [xor(a(1), a(0)), xor(a(2), a(0)), xor(b(0), a(0)), xor(b(1), a(0))];
        for (r, e) in expected.iter().enumerate() {
            assert_eq!(x.row(r), e.as_slice());
        }
        verify_round_trip(&g, &out, &gm, &store).unwrap();
    }

    #[test]
    fn single_packet_identity() {
        let cache = CacheRealization::empty(1, 1, 1);
        let demand = DemandRealization::new(vec![vec![0]], &cache).unwrap();
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        let out = outcome(&g, vec![0]);
        let gm: CodingMatrix<Gf65536> = mds_generator(1, 1).unwrap();
        let store = PacketStore::<Gf65536>::random(1, 1, 5, 2);
        let x = encode(&g, &out, &gm, &store).unwrap();
        assert_eq!(x.row(0), store.get(PacketId::new(0, 0)));
    }

    #[test]
    fn zero_payloads_encode_to_zero() {
        let (cache, demand) = random_small_instance(12, 4);
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        let out = gclc2(&g);
        let gm: CodingMatrix<Gf65536> = mds_generator(out.num_colors(), out.local_number).unwrap();
        let store = PacketStore::zeros(cache.m(), cache.packets(), 3);
        let x = encode(&g, &out, &gm, &store).unwrap();
        assert!(x.rows().all(|r| r.iter().all(|s| s.is_zero())));
    }

    #[test]
    fn cached_everything_is_vacuous() {
        let sets = vec![vec![vec![0, 1]], vec![vec![]]];
        let cache = CacheRealization::from_sets(1, 2, &sets).unwrap();
        let demand = DemandRealization::new(vec![vec![0], vec![0]], &cache).unwrap();
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        let out = gclc2(&g);
        let gm: CodingMatrix<Gf65536> = mds_generator(out.num_colors(), out.local_number).unwrap();
        let store = PacketStore::random(1, 2, 2, 0);
        let x = encode(&g, &out, &gm, &store).unwrap();
        assert!(decode(0, &x, &gm, &out, &g, &store).unwrap().is_empty());
        assert_eq!(decode(1, &x, &gm, &out, &g, &store).unwrap().len(), 2);
    }

    #[test]
    fn decode_ignores_uncached_payloads() {
        for seed in 0..100 {
            let (cache, demand) = random_small_instance(12, seed);
            let g = ConflictGraph::build(&cache, &demand).unwrap();
            let out = gclc(&g, Grouping::Cardinality);
            let gm: CodingMatrix<Gf65536> = mds_generator(out.num_colors(), out.local_number).unwrap();
            let store = PacketStore::random(cache.m(), cache.packets(), 4, seed);
            let x = encode(&g, &out, &gm, &store).unwrap();
            for u in 0..g.n_users() {
                let mut view = PacketStore::random(cache.m(), cache.packets(), 4, seed + 1000);
                for f in 0..cache.m() {
                    for i in cache.cached_in_file(u, f) {
                        let p = PacketId::new(f, i);
                        view.set(p, store.get(p));
                    }
                }
                for (p, got) in decode(u, &x, &gm, &out, &g, &view).unwrap() {
                    assert_eq!(got, store.get(p));
                }
            }
        }
    }

    #[test]
    fn round_trip_all_schemes() {
        for seed in 0..200 {
            let (cache, demand) = random_small_instance(12, seed);
            let g = ConflictGraph::build(&cache, &demand).unwrap();
            let store = PacketStore::<Gf65536>::random(cache.m(), cache.packets(), 2, seed);
            for out in [
                gclc(&g, Grouping::Cardinality),
                gclc2(&g),
                hglc(&g, HglcParams::default(), seed),
            ] {
                let gm = mds_generator(out.num_colors(), out.local_number).unwrap();
                verify_round_trip(&g, &out, &gm, &store).unwrap();
            }
        }
    }

    #[test]
    fn shape_mismatch() {
        let (cache, demand) = example_one();
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        let out = gclc2(&g);
        let gm: CodingMatrix<Gf65536> = mds_generator(5, 5).unwrap();
        let store = PacketStore::random(2, 3, 1, 0);
        assert!(matches!(
            encode(&g, &out, &gm, &store),
            Err(Error::DimensionMismatch(_))
        ));
        let gm: CodingMatrix<Gf65536> = mds_generator(5, 4).unwrap();
        let small = PacketStore::random(2, 2, 1, 0);
        assert!(encode(&g, &out, &gm, &small).is_err());
    }
}
