#![allow(dead_code)]

use mlss::blockio::{split_fixed, BlockView};
use mlss::keys::{SignatureAlgorithm, SigningKey, VerifyingKey};
use mlss::scheme::generate_keys;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Pseudo-random document bytes reproducible from `seed`.
pub fn document(seed: u64, len: usize) -> Vec<u8> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut doc = vec![0u8; len];
    rng.fill_bytes(&mut doc);
    doc
}

pub fn fixed_document(seed: u64, n: usize, block: usize) -> (Vec<u8>, BlockView) {
    let doc = document(seed, n * block);
    let view = split_fixed(doc.len() as u64, block as u64).unwrap();
    (doc, view)
}

pub fn stub_keys(seed: u64) -> (SigningKey, VerifyingKey) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    generate_keys(SignatureAlgorithm::TestStub, 128, &mut rng).unwrap()
}

pub fn ed25519_keys(seed: u64) -> (SigningKey, VerifyingKey) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    generate_keys(SignatureAlgorithm::Ed25519, 128, &mut rng).unwrap()
}

/// Flips one byte inside each listed block.
pub fn tamper(doc: &[u8], view: &BlockView, blocks: &[usize]) -> Vec<u8> {
    let mut out = doc.to_vec();
    for &j in blocks {
        let b = view.blocks()[j];
        assert!(b.len > 0, "cannot tamper an empty block");
        let at = (b.offset + b.len / 2) as usize;
        out[at] ^= 0x5A;
    }
    out
}

/// The 32 (d, n, t, w) cells of the published parameter tables, with the
/// block size each table uses.
pub const TABLE_CELLS: [(u32, usize, u64, u64, usize); 32] = [
    // d = 1
    (1, 2, 2, 2, 8192),
    (1, 8, 5, 20, 8192),
    (1, 32, 7, 112, 8192),
    (1, 128, 10, 640, 8192),
    (1, 16, 6, 48, 1024),
    (1, 64, 8, 256, 1024),
    (1, 256, 11, 1408, 1024),
    (1, 1024, 13, 6656, 1024),
    // d = 2
    (2, 2, 2, 2, 8192),
    (2, 8, 8, 8, 8192),
    (2, 32, 16, 96, 8192),
    (2, 128, 33, 384, 8192),
    (2, 16, 12, 48, 1024),
    (2, 64, 24, 192, 1024),
    (2, 256, 48, 768, 1024),
    (2, 1024, 62, 10646, 1024),
    // d = 3
    (3, 2, 2, 2, 8192),
    (3, 8, 8, 8, 8192),
    (3, 32, 22, 128, 8192),
    (3, 128, 45, 512, 8192),
    (3, 16, 16, 16, 1024),
    (3, 64, 32, 256, 1024),
    (3, 256, 64, 1024, 1024),
    (3, 1024, 110, 14195, 1024),
    // d = 10
    (10, 2, 2, 2, 8192),
    (10, 8, 8, 8, 8192),
    (10, 32, 32, 32, 8192),
    (10, 128, 124, 1408, 8192),
    (10, 16, 16, 16, 1024),
    (10, 64, 64, 64, 1024),
    (10, 256, 176, 2816, 1024),
    (10, 1024, 352, 11264, 1024),
];

/// (d, n) pairs with frozen canonical matrix digests.
pub const GOLDEN_DIGESTS: [(u32, usize, &str); 12] = [
    (1, 2, "32b6ab3f3f524b6d93456a679be337a53bc710fe0af999d5bfd11156918c801c"),
    (1, 6, "3da8c1f3c15a4d2f4d687c3f4bf69c9dde1044d736283a99d6783e390382b688"),
    (1, 128, "d92e8f0a7987b8d940992eff5845bb97b87e50d55a2c4e5b35ea0229d501fb3c"),
    (1, 1024, "0dd2c8935ab4cabeb7b78395c628ba61977860331b1c663c4fa7c206e4c814fd"),
    (2, 9, "811b4dc00838e5cdd9d109723038576151a5068e8787577fca732ddbdb649cba"),
    (2, 16, "953b6ed20ff7e2c5dc3e14d8c583914eb760b80cbfac5a0aabc0d4c4772127fa"),
    (2, 32, "a2cbd5cfa2485f480e2647844c94f92ac3152840dbd25058c63009f377a3d5b7"),
    (2, 1024, "8196fc89382af01a6d384fa65aed70448c70ab7d311e8c6b3b34569aa2461b40"),
    (3, 64, "75324d16aa32d828c831f84ecdbb99df7b5ffcbaf13546ace483f56c0f728a6d"),
    (3, 1024, "1ae13d7c8e4d3f0dc9b11301b6fb44d979a57ba5886a1adb833de35769ca1304"),
    (10, 256, "74b54d5faa77b0115cf5680e14dcc708e524982cad591f24020a3bea81e24546"),
    (10, 1024, "a13fee1463e58df6c3baf0fa33135f7df11fca9b010f95938015e3c91ac24e4f"),
];

/// Greedy-code matrices built directly (the planner would fall back).
pub const GOLDEN_PR_DIGESTS: [(u32, usize, &str); 2] = [
    (2, 40, "5e9f590ad28702f096d4bde91597f29f5062c91728642abcf7e1e007fcdfb26a"),
    (3, 30, "8656b16daf55fce8f80079c2900c861781b91eb68e8400865cc08ff0c62f8f83"),
];

pub struct GoldenFixture {
    pub name: &'static str,
    pub seed: u64,
    pub n: usize,
    pub block: usize,
    pub d: u32,
    pub hash: mlss::HashAlgorithm,
}

pub const GOLDEN_FIXTURES: [GoldenFixture; 3] = [
    GoldenFixture { name: "n16_d2_sha256", seed: 16, n: 16, block: 1024, d: 2, hash: mlss::HashAlgorithm::Sha256 },
    GoldenFixture { name: "n128_d1_sha256", seed: 128, n: 128, block: 512, d: 1, hash: mlss::HashAlgorithm::Sha256 },
    GoldenFixture { name: "n32_d3_sha512", seed: 32, n: 32, block: 700, d: 3, hash: mlss::HashAlgorithm::Sha512 },
];

/// Stub-backend signature container for a golden fixture.
pub fn golden_signature(f: &GoldenFixture) -> Vec<u8> {
    let (doc, view) = fixed_document(f.seed, f.n, f.block);
    let (sk, _) = stub_keys(f.seed);
    let mut h = mlss::HashBackend::new(f.hash);
    let sig = mlss::sign(&sk, &doc, &view, f.d, &mut h).unwrap();
    mlss::encode_signature(&sig).unwrap()
}

pub fn golden_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.mlss"))
}
