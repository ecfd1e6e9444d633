use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Owner of a random stream. Node handles never reach algorithm code; they
/// only separate the streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StreamKey {
    Node(usize),
    /// Clone `i` of host node `v`.
    Clone(usize, usize),
    /// Edge with unordered endpoints; [`StreamKey::edge`] normalizes.
    Edge(usize, usize),
    /// Layer `i` copy of an edge.
    EdgeClone(usize, usize, usize),
    Aux(u64),
}

impl StreamKey {
    pub fn edge(u: usize, v: usize) -> Self {
        StreamKey::Edge(u.min(v), u.max(v))
    }

    pub fn edge_clone(u: usize, v: usize, i: usize) -> Self {
        StreamKey::EdgeClone(u.min(v), u.max(v), i)
    }

    fn words(self) -> [u64; 4] {
        match self {
            StreamKey::Node(v) => [1, v as u64, 0, 0],
            StreamKey::Clone(v, i) => [2, v as u64, i as u64, 0],
            StreamKey::Edge(a, b) => [3, a as u64, b as u64, 0],
            StreamKey::EdgeClone(a, b, i) => [4, a as u64, b as u64, i as u64],
            StreamKey::Aux(x) => [5, x, 0, 0],
        }
    }
}

/// Purpose of a stream, so that e.g. PPS coins and phase coins of one node
/// never share draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    Pps,
    Phase,
    Role,
    Adversary,
    Init,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, key: StreamKey, tag: Tag) -> u64 {
    let mut h = splitmix(master ^ 0x5eed);
    for w in key.words() {
        h = splitmix(h ^ w);
    }
    splitmix(h ^ (tag as u64 + 1).wrapping_mul(0x2545_f491_4f6c_dd1d))
}

/// Seeded deterministic random stream.
#[derive(Debug, Clone)]
pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        RngStream(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn derive(master: u64, key: StreamKey, tag: Tag) -> Self {
        Self::from_seed(derive_seed(master, key, tag))
    }

    /// Fair coin.
    pub fn coin(&mut self) -> bool {
        self.0.next_u32() & 1 == 1
    }

    /// Uniform in `0..n`; panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p >= 1.0 {
            true
        } else if p <= 0.0 {
            false
        } else {
            self.0.gen_bool(p)
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}
