//! Multipath network model: l noiseless links between sender and
//! receiver, with configurable eavesdroppers.
//!
//! - weak Eve observes a proper subset of links;
//! - strong Eve observes all of them;
//! - a myopic adversary observes a subset and additionally flips chosen
//!   bit positions in the delivered payloads (injection only; correcting
//!   codes are out of scope, so experiments record failures rather than
//!   repair them).
//!
//! Injection against a strong observer is out of scope beyond recording:
//! any error-correcting augmentation of the premix would itself have to
//! be encrypted (at least 2t + 1 encrypted payloads to survive t
//! injected errors), and no such augmentation is built.
//!
//! Secrecy experiments quantify leakage as total-variation distance
//! between the conditional distribution of each message symbol given the
//! observation and its marginal, under the uniform prior. Exact mode
//! enumerates every message column and must report 0 for a valid code; a
//! deterministic full leak reaches the point-mass maximum 1 - 1/q.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::cryptosys::SchemeId;
use crate::hybrid::{
    huncc_decode, huncc_encode, DecryptKeys, EncryptKeys, HunccConfig, HunccError, PathPayload,
    Transmission,
};

/// States enumerated by the exact secrecy experiment: order^l.
const EXACT_STATE_LIMIT: u64 = 1 << 24;

#[derive(Debug)]
pub enum NetsimError {
    /// Transmission payload count differs from the link count.
    PayloadCountMismatch { links: usize, payloads: usize },
    /// Eavesdropper specification violates its kind's constraints.
    BadEveSpec(String),
    /// A configured bit flip lands outside the delivered payload.
    FlipOutOfRange { link: usize, bit: usize },
    /// Exact secrecy experiment too large; use sampled mode.
    TooLargeForExact { states: u64, limit: u64 },
    /// Malformed scenario file.
    BadScenario(String),
    Pipeline(HunccError),
}

impl fmt::Display for NetsimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetsimError::PayloadCountMismatch { links, payloads } => {
                write!(f, "{payloads} payloads for {links} links")
            }
            NetsimError::BadEveSpec(msg) => write!(f, "bad eavesdropper spec: {msg}"),
            NetsimError::FlipOutOfRange { link, bit } => {
                write!(f, "flip at link {link} bit {bit} out of range")
            }
            NetsimError::TooLargeForExact { states, limit } => {
                write!(f, "{states} states exceed exact-mode limit {limit}; use sampled mode")
            }
            NetsimError::BadScenario(msg) => write!(f, "bad scenario: {msg}"),
            NetsimError::Pipeline(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for NetsimError {}

impl From<HunccError> for NetsimError {
    fn from(e: HunccError) -> Self {
        NetsimError::Pipeline(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveKind {
    Weak,
    Strong,
    Myopic,
}

/// Eavesdropper capability: which links are observed and, for the myopic
/// adversary, which (link, bit) positions get flipped in delivery (the
/// flip list's length is the injection budget actually spent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EveSpec {
    pub kind: EveKind,
    pub links: BTreeSet<usize>,
    pub flips: Vec<(usize, usize)>,
}

impl EveSpec {
    pub fn weak(links: impl IntoIterator<Item = usize>) -> Self {
        EveSpec { kind: EveKind::Weak, links: links.into_iter().collect(), flips: Vec::new() }
    }

    pub fn strong(l: usize) -> Self {
        EveSpec { kind: EveKind::Strong, links: (0..l).collect(), flips: Vec::new() }
    }

    pub fn myopic(links: impl IntoIterator<Item = usize>, flips: Vec<(usize, usize)>) -> Self {
        EveSpec { kind: EveKind::Myopic, links: links.into_iter().collect(), flips }
    }
}

/// The network: l noiseless links plus an optional eavesdropper.
#[derive(Debug, Clone)]
pub struct NetworkConfig {
    links: usize,
    eve: Option<EveSpec>,
}

impl NetworkConfig {
    pub fn new(links: usize, eve: Option<EveSpec>) -> Result<Self, NetsimError> {
        if links == 0 {
            return Err(NetsimError::BadEveSpec("network needs at least one link".into()));
        }
        if let Some(spec) = &eve {
            if spec.links.iter().any(|&p| p >= links) {
                return Err(NetsimError::BadEveSpec("observed link out of range".into()));
            }
            match spec.kind {
                EveKind::Weak => {
                    if spec.links.len() >= links {
                        return Err(NetsimError::BadEveSpec(
                            "weak eavesdropper must observe fewer than all links".into(),
                        ));
                    }
                    if !spec.flips.is_empty() {
                        return Err(NetsimError::BadEveSpec("weak eavesdropper cannot inject".into()));
                    }
                }
                EveKind::Strong => {
                    if spec.links.len() != links {
                        return Err(NetsimError::BadEveSpec(
                            "strong eavesdropper observes all links".into(),
                        ));
                    }
                    if !spec.flips.is_empty() {
                        return Err(NetsimError::BadEveSpec("strong eavesdropper cannot inject".into()));
                    }
                }
                EveKind::Myopic => {
                    if spec.flips.iter().any(|&(link, _)| !spec.links.contains(&link)) {
                        return Err(NetsimError::BadEveSpec(
                            "myopic injection limited to observed links".into(),
                        ));
                    }
                }
            }
        }
        Ok(NetworkConfig { links, eve })
    }

    pub fn links(&self) -> usize {
        self.links
    }

    pub fn eve(&self) -> Option<&EveSpec> {
        self.eve.as_ref()
    }
}

/// What the eavesdropper captured: payload bytes per observed link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub kind: Option<EveKind>,
    pub captured: BTreeMap<usize, Vec<u8>>,
    pub sequence: u64,
}

/// What the receiver got: delivered payloads (bit-exact for noiseless
/// links) plus the injected-error log for myopic runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeliveryReport {
    pub delivered: Vec<PathPayload>,
    pub injected: Vec<(usize, usize)>,
}

/// Pushes one transmission through the network. Delivery is bit-exact
/// except for configured myopic flips; the observation holds exactly the
/// payloads of the observed links as sent.
pub fn transmit(
    net: &NetworkConfig,
    transmission: &Transmission,
    sequence: u64,
) -> Result<(DeliveryReport, Observation), NetsimError> {
    if transmission.payloads.len() != net.links {
        return Err(NetsimError::PayloadCountMismatch {
            links: net.links,
            payloads: transmission.payloads.len(),
        });
    }
    let mut captured = BTreeMap::new();
    if let Some(spec) = &net.eve {
        for p in &transmission.payloads {
            if spec.links.contains(&(p.path as usize)) {
                captured.insert(p.path as usize, p.bits.as_bytes().to_vec());
            }
        }
    }
    let mut delivered = transmission.payloads.clone();
    let mut injected = Vec::new();
    if let Some(spec) = &net.eve {
        for &(link, bit) in &spec.flips {
            let payload = delivered
                .iter_mut()
                .find(|p| p.path as usize == link)
                .ok_or(NetsimError::FlipOutOfRange { link, bit })?;
            if bit >= payload.bits.len() {
                return Err(NetsimError::FlipOutOfRange { link, bit });
            }
            payload.bits.flip(bit);
            injected.push((link, bit));
        }
    }
    Ok((
        DeliveryReport { delivered, injected },
        Observation { kind: net.eve.as_ref().map(|e| e.kind), captured, sequence },
    ))
}

/// Leakage measurement for one message index.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakEntry {
    pub j: usize,
    pub max_tv: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecrecyMode {
    Exact,
    Sampled,
}

/// Outcome of a secrecy experiment over the effective observed symbol
/// set (observed plaintext paths, plus observed identity-cipher paths,
/// which hide nothing).
#[derive(Debug, Clone, PartialEq)]
pub struct SecrecyExperimentReport {
    pub mode: SecrecyMode,
    pub observed_symbols: Vec<usize>,
    pub messages: u64,
    pub per_index: Vec<LeakEntry>,
    pub max_tv: f64,
    /// Exact mode only: zero leakage across every index and observation.
    pub secure: bool,
}

impl SecrecyExperimentReport {
    /// CSV schema: `j,max_tv` rows, six significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,max_tv\n");
        for e in &self.per_index {
            out.push_str(&format!("{},{:.6}\n", e.j, e.max_tv));
        }
        out
    }
}

/// Measures the conditional distribution of each message symbol given
/// the eavesdropper's view of one premixed column, by exhaustive
/// enumeration (`trials` = None) or seeded sampling.
pub fn run_secrecy_experiment(
    net: &NetworkConfig,
    config: &HunccConfig,
    trials: Option<u64>,
    seed: [u8; 32],
) -> Result<SecrecyExperimentReport, NetsimError> {
    if net.links != config.paths() {
        return Err(NetsimError::PayloadCountMismatch {
            links: net.links,
            payloads: config.paths(),
        });
    }
    let observed: Vec<usize> = match &net.eve {
        None => Vec::new(),
        Some(spec) => spec
            .links
            .iter()
            .copied()
            .filter(|&p| !config.is_encrypted(p) || config_scheme_leaks(config))
            .collect(),
    };
    let field = config.field().clone();
    let order = field.order();
    let l = config.paths();
    let generator = config.code().generator();
    let w_obs = observed.len();
    let y_states = order.pow(w_obs as u32) as usize;
    let ord = order as usize;
    // counts[j][y * order + v]
    let mut counts = vec![vec![0u64; y_states * ord]; l];
    let mut digits = vec![0u64; l];
    let tally = |digits: &[u64], counts: &mut Vec<Vec<u64>>| {
        let mut y_idx = 0usize;
        for (k, &col) in observed.iter().enumerate() {
            let mut xj = 0u64;
            for (i, &mi) in digits.iter().enumerate() {
                xj = field.add_code(xj, field.mul_code(mi, generator.get(i, col)));
            }
            y_idx += (xj as usize) * ord.pow(k as u32);
        }
        for (j, &mj) in digits.iter().enumerate() {
            counts[j][y_idx * ord + mj as usize] += 1;
        }
    };
    let (mode, messages) = match trials {
        None => {
            let states = order
                .checked_pow(l as u32)
                .filter(|&s| s <= EXACT_STATE_LIMIT)
                .ok_or(NetsimError::TooLargeForExact {
                    states: order.saturating_pow(l as u32),
                    limit: EXACT_STATE_LIMIT,
                })?;
            for msg in 0..states {
                let mut t = msg;
                for d in digits.iter_mut() {
                    *d = t % order;
                    t /= order;
                }
                tally(&digits, &mut counts);
            }
            (SecrecyMode::Exact, states)
        }
        Some(n) => {
            let mut rng = ChaCha20Rng::from_seed(seed);
            for _ in 0..n {
                for d in digits.iter_mut() {
                    *d = rng.gen_range(0..order);
                }
                tally(&digits, &mut counts);
            }
            (SecrecyMode::Sampled, n)
        }
    };
    let mut per_index = Vec::with_capacity(l);
    let mut max_tv = 0f64;
    for (j, cj) in counts.iter().enumerate() {
        let mut worst = 0f64;
        for y in 0..y_states {
            let slice = &cj[y * ord..(y + 1) * ord];
            let total: u64 = slice.iter().sum();
            if total == 0 {
                continue;
            }
            let tv = 0.5
                * slice
                    .iter()
                    .map(|&c| (c as f64 / total as f64 - 1.0 / ord as f64).abs())
                    .sum::<f64>();
            worst = worst.max(tv);
        }
        max_tv = max_tv.max(worst);
        per_index.push(LeakEntry { j, max_tv: worst });
    }
    Ok(SecrecyExperimentReport {
        mode,
        observed_symbols: observed,
        messages,
        per_index,
        max_tv,
        secure: mode == SecrecyMode::Exact && max_tv == 0.0,
    })
}

fn config_scheme_leaks(config: &HunccConfig) -> bool {
    // the identity test cipher hides nothing, so an observed "encrypted"
    // path contributes its symbols to the eavesdropper's view
    matches!(config.scheme(), SchemeId::Identity)
}

/// End-to-end reliability report over the simulated network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeExperimentReport {
    pub trials: u64,
    pub successes: u64,
    pub detected_failures: u64,
    pub silent_corruptions: u64,
}

impl DecodeExperimentReport {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            return 1.0;
        }
        self.successes as f64 / self.trials as f64
    }

    /// CSV schema: one row of counters plus the rate.
    pub fn to_csv(&self) -> String {
        format!(
            "trials,successes,detected_failures,silent_corruptions,success_rate\n{},{},{},{},{:.6}\n",
            self.trials,
            self.successes,
            self.detected_failures,
            self.silent_corruptions,
            self.success_rate()
        )
    }
}

/// Runs encode -> transmit -> decode `trials` times with per-trial
/// seeded randomness (derived from `seed` and the trial index, so
/// parallel and serial execution would tally identically) and classifies
/// each outcome.
pub fn run_decode_experiment(
    net: &NetworkConfig,
    config: &HunccConfig,
    enc_keys: &EncryptKeys<'_>,
    dec_keys: &DecryptKeys<'_>,
    trials: u64,
    message_len: usize,
    seed: [u8; 32],
) -> Result<DecodeExperimentReport, NetsimError> {
    let mut successes = 0u64;
    let mut detected = 0u64;
    let mut silent = 0u64;
    for trial in 0..trials {
        let trial_seed = derive_seed(seed, trial);
        let mut rng = ChaCha20Rng::from_seed(trial_seed);
        let mut message = vec![0u8; message_len];
        rng.fill_bytes(&mut message);
        let mut encode_seed = [0u8; 32];
        rng.fill_bytes(&mut encode_seed);
        let sent = huncc_encode(config, &message, enc_keys, encode_seed)?;
        let (report, _) = transmit(net, &sent, trial)?;
        let received = Transmission {
            config_digest: sent.config_digest,
            message_bytes: sent.message_bytes,
            block_count: sent.block_count,
            payloads: report.delivered,
        };
        match huncc_decode(config, &received, dec_keys) {
            Ok(back) if back == message => successes += 1,
            Ok(_) => silent += 1,
            Err(_) => detected += 1,
        }
    }
    Ok(DecodeExperimentReport {
        trials,
        successes,
        detected_failures: detected,
        silent_corruptions: silent,
    })
}

pub fn derive_seed(base: [u8; 32], index: u64) -> [u8; 32] {
    let mut out = base;
    for (i, b) in index.to_le_bytes().iter().enumerate() {
        out[i] ^= b;
    }
    out
}

/// Parsed scenario file. Schema: `key = value` lines with `#` comments;
/// keys l, c, u, preset, eve.kind, eve.links, eve.flips, trials, seed,
/// and optional mode (decode | secrecy) and message_len. Secrecy
/// scenarios run exact enumeration unless `trials` is given, which
/// switches to seeded sampling; decode scenarios default to 100 trials.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub l: usize,
    pub c: usize,
    pub u: usize,
    pub preset: String,
    pub eve: Option<EveSpec>,
    pub trials: Option<u64>,
    pub seed: [u8; 32],
    pub mode: ScenarioMode,
    pub message_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioMode {
    Decode,
    Secrecy,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, NetsimError> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                NetsimError::BadScenario(format!("line {}: missing '='", lineno + 1))
            })?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |key: &str| {
            map.get(key)
                .cloned()
                .ok_or_else(|| NetsimError::BadScenario(format!("missing key {key}")))
        };
        let parse_num = |key: &str, v: &str| {
            v.parse::<u64>()
                .map_err(|_| NetsimError::BadScenario(format!("{key}: expected a number")))
        };
        let l = parse_num("l", &get("l")?)? as usize;
        let c = parse_num("c", &get("c")?)? as usize;
        let u = parse_num("u", &get("u")?)? as usize;
        let preset = get("preset")?;
        let trials = map.get("trials").map(|v| parse_num("trials", v)).transpose()?;
        let seed = match map.get("seed") {
            Some(v) => parse_seed_hex(v)
                .ok_or_else(|| NetsimError::BadScenario("seed: expected 64 hex digits".into()))?,
            None => [0u8; 32],
        };
        let mode = match map.get("mode").map(String::as_str) {
            None | Some("decode") => ScenarioMode::Decode,
            Some("secrecy") => ScenarioMode::Secrecy,
            Some(other) => {
                return Err(NetsimError::BadScenario(format!("mode: unknown value {other}")))
            }
        };
        let message_len =
            map.get("message_len").map(|v| parse_num("message_len", v)).transpose()?.unwrap_or(64)
                as usize;
        let eve = match map.get("eve.kind").map(String::as_str) {
            None | Some("none") => None,
            Some(kind) => {
                let links: BTreeSet<usize> = match map.get("eve.links") {
                    Some(v) if !v.is_empty() => v
                        .split(',')
                        .map(|s| {
                            s.trim().parse::<usize>().map_err(|_| {
                                NetsimError::BadScenario("eve.links: expected indices".into())
                            })
                        })
                        .collect::<Result<_, _>>()?,
                    _ => BTreeSet::new(),
                };
                let flips: Vec<(usize, usize)> = match map.get("eve.flips") {
                    Some(v) if !v.is_empty() => v
                        .split(',')
                        .map(|s| {
                            let (a, b) = s.trim().split_once(':').ok_or_else(|| {
                                NetsimError::BadScenario("eve.flips: expected link:bit".into())
                            })?;
                            Ok::<(usize, usize), NetsimError>((
                                a.parse::<usize>().map_err(|_| {
                                    NetsimError::BadScenario("eve.flips: bad link".into())
                                })?,
                                b.parse::<usize>().map_err(|_| {
                                    NetsimError::BadScenario("eve.flips: bad bit".into())
                                })?,
                            ))
                        })
                        .collect::<Result<_, _>>()?,
                    _ => Vec::new(),
                };
                let kind = match kind {
                    "weak" => EveKind::Weak,
                    "strong" => EveKind::Strong,
                    "myopic" => EveKind::Myopic,
                    other => {
                        return Err(NetsimError::BadScenario(format!(
                            "eve.kind: unknown value {other}"
                        )))
                    }
                };
                let links = if kind == EveKind::Strong && links.is_empty() {
                    (0..l).collect()
                } else {
                    links
                };
                Some(EveSpec { kind, links, flips })
            }
        };
        let known = [
            "l", "c", "u", "preset", "trials", "seed", "mode", "message_len", "eve.kind",
            "eve.links", "eve.flips",
        ];
        for key in map.keys() {
            if !known.contains(&key.as_str()) {
                return Err(NetsimError::BadScenario(format!("unknown key {key}")));
            }
        }
        Ok(Scenario { l, c, u, preset, eve, trials, seed, mode, message_len })
    }
}

/// 64 hex digits -> 32-byte seed.
pub fn parse_seed_hex(s: &str) -> Option<[u8; 32]> {
    let s = s.trim();
    if s.len() != 64 {
        return None;
    }
    let mut out = [0u8; 32];
    for i in 0..32 {
        out[i] = u8::from_str_radix(&s[2 * i..2 * i + 2], 16).ok()?;
    }
    Some(out)
}
