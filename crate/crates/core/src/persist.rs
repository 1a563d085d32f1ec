//! Versioned flat file for trained networks.
//!
//! All fields are little-endian fixed-width integers; the two log-normal
//! parameters are stored as their IEEE-754 bit patterns in a `u64`.
//!
//! ```text
//! header (72 bytes)
//!   0   [u8; 8]  magic "PERCNET\0"
//!   8   u32      format version (1)
//!   12  u32      feature count F
//!   16  u32      neuron count K
//!   20  u64      seed
//!   28  u64      subsample mu (f64 bits)
//!   36  u64      subsample sigma (f64 bits)
//!   44  u64      subsample min override (0 = min(10, N))
//!   52  u64      subsample max override (0 = min(1000, N))
//!   60  u64      fixed subsample size (0 = none, u64::MAX = all rows)
//!   68  u8       bit 0: with replacement, bit 1: eject
//!   69  u8       decimals rule (0xFF = auto, otherwise the fixed value)
//!   70  u8       window rule (0 = off-median, 1 = all observations)
//!   71  u8       reserved, 0
//! feature scales
//!   F x u8       decimals per feature
//! neuron records, K times, (32 + 8F) bytes each
//!   u32          neuron index
//!   u32          drawn size
//!   u32          ejected count
//!   u8           bit 0: degenerate, bit 1: refit skipped
//!   [u8; 3]      reserved, 0
//!   u64          total deviation S
//!   u64          window count W
//!   F x i64      center (scaled integer medians)
//! ```
//!
//! Loading checks the magic, version, flag consistency and that no bytes trail
//! the last record, so a save/load cycle reproduces the model bit for bit.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::kernel::AContrarioTest;
use crate::network::{DecimalsRule, NetworkConfig, NetworkModel, NeuronRecord, ALL_ROWS};
use crate::neuron::WindowRule;

pub const MAGIC: &[u8; 8] = b"PERCNET\0";
pub const FORMAT_VERSION: u32 = 1;

const AUTO_DECIMALS: u8 = 0xFF;
const FLAG_REPLACEMENT: u8 = 1;
const FLAG_EJECT: u8 = 2;
const NEURON_DEGENERATE: u8 = 1;
const NEURON_REFIT_SKIPPED: u8 = 2;

fn size_field(v: Option<usize>) -> u64 {
    match v {
        None => 0,
        Some(ALL_ROWS) => u64::MAX,
        Some(n) => n as u64,
    }
}

fn size_from_field(v: u64) -> Option<usize> {
    match v {
        0 => None,
        u64::MAX => Some(ALL_ROWS),
        n => Some(n as usize),
    }
}

fn u32_field(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Format(format!("{what} {v} does not fit in u32")))
}

pub fn write_model<W: Write>(model: &NetworkModel, mut out: W) -> Result<()> {
    let cfg = model.config();
    let mut buf =
        Vec::with_capacity(72 + model.n_features() + model.n_neurons() * (32 + 8 * model.n_features()));
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&u32_field(model.n_features(), "feature count")?.to_le_bytes());
    buf.extend_from_slice(&u32_field(model.n_neurons(), "neuron count")?.to_le_bytes());
    buf.extend_from_slice(&cfg.seed.to_le_bytes());
    buf.extend_from_slice(&cfg.subsample_mu.to_bits().to_le_bytes());
    buf.extend_from_slice(&cfg.subsample_sigma.to_bits().to_le_bytes());
    buf.extend_from_slice(&size_field(cfg.subsample_min).to_le_bytes());
    buf.extend_from_slice(&size_field(cfg.subsample_max).to_le_bytes());
    buf.extend_from_slice(&size_field(cfg.fixed_subsample).to_le_bytes());
    let mut flags = 0u8;
    if cfg.with_replacement {
        flags |= FLAG_REPLACEMENT;
    }
    if cfg.eject {
        flags |= FLAG_EJECT;
    }
    buf.push(flags);
    buf.push(match cfg.decimals {
        DecimalsRule::Auto => AUTO_DECIMALS,
        DecimalsRule::Fixed(d) => d,
    });
    buf.push(cfg.window_rule.code());
    buf.push(0);
    buf.extend_from_slice(model.decimals());
    for n in model.neurons() {
        buf.extend_from_slice(&n.index.to_le_bytes());
        buf.extend_from_slice(&n.drawn_size.to_le_bytes());
        buf.extend_from_slice(&n.ejected_count.to_le_bytes());
        let mut nf = 0u8;
        if n.is_degenerate() {
            nf |= NEURON_DEGENERATE;
        }
        if n.refit_skipped {
            nf |= NEURON_REFIT_SKIPPED;
        }
        buf.extend_from_slice(&[nf, 0, 0, 0]);
        buf.extend_from_slice(&n.test.total_deviation.to_le_bytes());
        buf.extend_from_slice(&n.test.windows.to_le_bytes());
        for c in &n.center {
            buf.extend_from_slice(&c.to_le_bytes());
        }
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let slice = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Format(format!("truncated at byte {}", self.pos)))?;
        self.pos = end;
        Ok(slice.try_into().expect("length checked"))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take()?))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take()?))
    }
}

pub fn read_model<R: Read>(mut input: R) -> Result<NetworkModel> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut c = Cursor { bytes: &bytes, pos: 0 };
    if &c.take::<8>()? != MAGIC {
        return Err(Error::Format("bad magic, not a perception network file".into()));
    }
    let version = c.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format version {version}")));
    }
    let n_features = c.u32()? as usize;
    let n_neurons = c.u32()? as usize;
    let seed = c.u64()?;
    let subsample_mu = f64::from_bits(c.u64()?);
    let subsample_sigma = f64::from_bits(c.u64()?);
    let subsample_min = size_from_field(c.u64()?);
    let subsample_max = size_from_field(c.u64()?);
    let fixed_subsample = size_from_field(c.u64()?);
    let flags = c.u8()?;
    let decimals = match c.u8()? {
        AUTO_DECIMALS => DecimalsRule::Auto,
        d => DecimalsRule::Fixed(d),
    };
    let rule = c.u8()?;
    let window_rule =
        WindowRule::from_code(rule).ok_or_else(|| Error::Format(format!("unknown window rule {rule}")))?;
    c.u8()?;
    let config = NetworkConfig {
        n_neurons,
        subsample_mu,
        subsample_sigma,
        subsample_min,
        subsample_max,
        fixed_subsample,
        with_replacement: flags & FLAG_REPLACEMENT != 0,
        eject: flags & FLAG_EJECT != 0,
        seed,
        decimals,
        window_rule,
    };
    config.validate().map_err(|e| Error::Format(e.to_string()))?;
    let scales = (0..n_features).map(|_| c.u8()).collect::<Result<Vec<_>>>()?;
    let mut neurons = Vec::with_capacity(n_neurons);
    for _ in 0..n_neurons {
        let index = c.u32()?;
        let drawn_size = c.u32()?;
        let ejected_count = c.u32()?;
        let nf = c.take::<4>()?[0];
        let test = AContrarioTest::new(c.u64()?, c.u64()?);
        let center = (0..n_features).map(|_| c.i64()).collect::<Result<Vec<_>>>()?;
        if (nf & NEURON_DEGENERATE != 0) != test.is_degenerate() {
            return Err(Error::Format(format!("neuron {index}: degenerate flag disagrees with S, W")));
        }
        if ejected_count > drawn_size {
            return Err(Error::Format(format!("neuron {index}: ejected more than drawn")));
        }
        neurons.push(NeuronRecord {
            index,
            center,
            test,
            drawn_size,
            ejected_count,
            refit_skipped: nf & NEURON_REFIT_SKIPPED != 0,
        });
    }
    if c.pos != bytes.len() {
        return Err(Error::Format(format!("{} trailing bytes", bytes.len() - c.pos)));
    }
    NetworkModel::from_parts(config, scales, neurons).map_err(|e| Error::Format(e.to_string()))
}

pub fn save_model(model: &NetworkModel, path: impl AsRef<Path>) -> Result<()> {
    write_model(model, BufWriter::new(File::create(path)?))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<NetworkModel> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    read_model(BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;

    fn model() -> NetworkModel {
        let rows: Vec<Vec<f64>> = (0..60).map(|i| vec![(i % 7) as f64 * 0.5, (i % 11) as f64]).collect();
        let data = Dataset::from_rows("m", rows, None).unwrap();
        NetworkModel::fit(&data, &NetworkConfig::default().with_neurons(12).with_seed(5)).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let m = model();
        let mut bytes = Vec::new();
        write_model(&m, &mut bytes).unwrap();
        assert_eq!(&bytes[..8], MAGIC);
        assert_eq!(bytes.len(), 72 + 2 + 12 * (32 + 16));
        let back = read_model(bytes.as_slice()).unwrap();
        assert_eq!(back, m);
        let mut again = Vec::new();
        write_model(&back, &mut again).unwrap();
        assert_eq!(again, bytes);
    }

    #[test]
    fn single_neuron_sentinel_survives() {
        let data = Dataset::univariate("u", &[1., 2., 3., 9.]).unwrap();
        let m = NetworkModel::fit(&data, &NetworkConfig::single_neuron()).unwrap();
        let mut bytes = Vec::new();
        write_model(&m, &mut bytes).unwrap();
        assert_eq!(read_model(bytes.as_slice()).unwrap(), m);
    }

    #[test]
    fn rejects_corruption() {
        let m = model();
        let mut bytes = Vec::new();
        write_model(&m, &mut bytes).unwrap();

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(read_model(bad.as_slice()), Err(Error::Format(_))));

        let mut bad = bytes.clone();
        bad[8] = 2;
        assert!(read_model(bad.as_slice()).is_err());

        assert!(read_model(&bytes[..bytes.len() - 1]).is_err());

        let mut bad = bytes.clone();
        bad.push(0);
        assert!(read_model(bad.as_slice()).is_err());

        // flip the degenerate flag of the first neuron
        let mut bad = bytes.clone();
        bad[72 + 2 + 12] ^= NEURON_DEGENERATE;
        assert!(read_model(bad.as_slice()).is_err());
    }

    #[test]
    fn missing_file() {
        assert!(matches!(load_model("/no/such/model.bin"), Err(Error::MissingFile(_))));
    }
}
