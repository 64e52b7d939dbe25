//! Corpus benchmark: every image under scalar and symbol-reduced coding, with
//! and without DC differencing, reported as CSV.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::codec::{self, CodecConfig, EntropyMode};
use crate::error::{Error, Result};
use crate::image_io::{self, generate_test_image, Image, TestPattern};
use crate::metrics::{self, format_db, CompressionReport, ModeLabel};
use crate::par::{self, Execution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusImage {
    pub name: String,
    pub image: Image,
}

/// Every `*.pgm` in `dir`, sorted by file name.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<CorpusImage>> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| Error::io(format!("reading {}", dir.display()), e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| Error::io(format!("reading {}", dir.display()), e))?
            .path();
        if path
            .extension()
            .is_some_and(|x| x.eq_ignore_ascii_case("pgm"))
        {
            paths.push(path);
        }
    }
    paths.sort();
    let corpus = paths
        .into_iter()
        .map(|p| {
            let bytes =
                std::fs::read(&p).map_err(|e| Error::io(format!("reading {}", p.display()), e))?;
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(CorpusImage {
                name,
                image: image_io::read_pgm(&bytes)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if corpus.is_empty() {
        return Err(Error::Config(format!(
            "empty corpus: no .pgm files in {}",
            dir.display()
        )));
    }
    Ok(corpus)
}

/// The three generated patterns, labelled `synthetic-<pattern>`.
pub fn synthetic_corpus(size: usize) -> Vec<CorpusImage> {
    TestPattern::ALL
        .iter()
        .map(|&kind| CorpusImage {
            name: format!("synthetic-{}", kind.name()),
            image: generate_test_image(kind, size, size, 0),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchOptions {
    /// Group sizes for the reduced runs; each is paired with one scalar run.
    pub group_sizes: Vec<usize>,
    pub execution: Execution,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            group_sizes: vec![crate::entropy::DEFAULT_GROUP_SIZE],
            execution: Execution::Sequential,
        }
    }
}

impl BenchOptions {
    /// Scalar plus one reduced config per group size, each without then
    /// with DC differencing.
    pub fn configs(&self) -> Vec<CodecConfig> {
        let mut out = Vec::new();
        for dc in [false, true] {
            out.push(CodecConfig::scalar().with_dc_diff(dc));
            for &g in &self.group_sizes {
                out.push(CodecConfig::reduced(g).with_dc_diff(dc));
            }
        }
        out
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub report: CompressionReport,
    /// Payload-CR gain of a reduced run over the scalar run with the same DC
    /// setting, in percent. `None` for scalar rows.
    pub improvement_pct: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
    /// Broken parity or Shannon-bound checks; empty on a clean run.
    pub violations: Vec<String>,
}

/// Compresses, serializes, parses back and decompresses one image, returning
/// the report and the reconstruction.
pub fn evaluate(name: &str, img: &Image, cfg: &CodecConfig) -> Result<(CompressionReport, Image)> {
    let bytes = codec::compress(img, cfg)?.serialize()?;
    evaluate_bytes(name, img, cfg, &bytes)
}

/// Report for an already serialized file produced from `img` under `cfg`.
pub fn evaluate_bytes(
    name: &str,
    img: &Image,
    cfg: &CodecConfig,
    bytes: &[u8],
) -> Result<(CompressionReport, Image)> {
    let parsed = crate::container::CompressedFile::deserialize(bytes)?;
    let recon = codec::decompress_with(&parsed, cfg.execution)?;
    let stats = codec::entropy_stats(&parsed)?;
    let wrap = |e: metrics::MetricsError| Error::Invariant(e.to_string());
    let original = metrics::original_bits(img.width(), img.height());
    let payload_bits = parsed.payload_bit_length();
    let report = CompressionReport {
        image: name.to_owned(),
        mode: match cfg.entropy_mode {
            EntropyMode::Scalar => ModeLabel::Scalar,
            EntropyMode::Reduced => ModeLabel::Reduced,
        },
        group_size: parsed.group_size(),
        dc_diff: cfg.dc_diff,
        entropy_bits: stats.entropy_bits,
        l_avg: stats.l_avg,
        payload_cr: metrics::compression_ratio(original, payload_bits).map_err(wrap)?,
        file_cr: metrics::compression_ratio(original, bytes.len() as u64 * 8).map_err(wrap)?,
        psnr_db: metrics::psnr(img, &recon).map_err(wrap)?,
        payload_bits,
        file_bytes: bytes.len() as u64,
        alphabet_size: stats.alphabet_size,
    };
    Ok((report, recon))
}

fn bench_image(
    item: &CorpusImage,
    configs: &[CodecConfig],
) -> Result<(Vec<BenchRow>, Vec<String>)> {
    let mut rows = Vec::with_capacity(configs.len());
    let mut recons = Vec::with_capacity(configs.len());
    let mut violations = Vec::new();
    for cfg in configs {
        let (report, recon) = evaluate(&item.name, &item.image, cfg)?;
        if report.l_avg + 1e-9 < report.entropy_bits {
            violations.push(format!(
                "{}: L_avg {} below entropy {} ({} g={})",
                item.name, report.l_avg, report.entropy_bits, report.mode, report.group_size
            ));
        }
        // a one-symbol alphabet still spends one bit per symbol at H = 0
        let upper_ok = if report.alphabet_size == 1 {
            report.l_avg == 1.0
        } else {
            report.l_avg < report.entropy_bits + 1.0
        };
        if report.mode == ModeLabel::Scalar && !upper_ok {
            violations.push(format!(
                "{}: scalar L_avg {} not below entropy + 1 ({})",
                item.name, report.l_avg, report.entropy_bits
            ));
        }
        rows.push(BenchRow {
            report,
            improvement_pct: None,
        });
        recons.push(recon);
    }
    for (cfg, recon) in configs.iter().zip(&recons).skip(1) {
        if *recon != recons[0] {
            violations.push(format!(
                "{}: reconstruction under {:?} g={} dc_diff={} differs from scalar",
                item.name, cfg.entropy_mode, cfg.group_size, cfg.dc_diff
            ));
        }
    }
    for i in 0..rows.len() {
        if rows[i].report.mode == ModeLabel::Reduced {
            let dc = rows[i].report.dc_diff;
            if let Some(base) = rows
                .iter()
                .find(|r| r.report.mode == ModeLabel::Scalar && r.report.dc_diff == dc)
            {
                let gain = (rows[i].report.payload_cr / base.report.payload_cr - 1.0) * 100.0;
                rows[i].improvement_pct = Some(gain);
            }
        }
    }
    Ok((rows, violations))
}

/// Runs every config on every image. Rows come out in corpus order, then
/// config order, regardless of scheduling.
pub fn run_bench(corpus: &[CorpusImage], opts: &BenchOptions) -> Result<BenchResult> {
    if corpus.is_empty() {
        return Err(Error::Config("empty corpus".into()));
    }
    let configs: Vec<CodecConfig> = opts
        .configs()
        .into_iter()
        .map(|c| c.with_execution(opts.execution))
        .collect();
    for c in &configs {
        c.validate()?;
    }
    let per_image = par::map(opts.execution, corpus, |item| bench_image(item, &configs));
    let mut result = BenchResult {
        rows: Vec::new(),
        violations: Vec::new(),
    };
    for r in per_image {
        let (rows, violations) = r?;
        result.rows.extend(rows);
        result.violations.extend(violations);
    }
    Ok(result)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    image: &'a str,
    mode: ModeLabel,
    group_size: u8,
    dc_diff: u8,
    entropy_bits: String,
    l_avg: String,
    payload_cr: String,
    file_cr: String,
    psnr_db: String,
    improvement_pct: String,
}

pub fn write_csv<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let to_io = |e: csv::Error| Error::io("writing CSV", std::io::Error::other(e.to_string()));
    for row in rows {
        let r = &row.report;
        w.serialize(CsvRow {
            image: &r.image,
            mode: r.mode,
            group_size: r.group_size,
            dc_diff: r.dc_diff.into(),
            entropy_bits: format!("{:.6}", r.entropy_bits),
            l_avg: format!("{:.6}", r.l_avg),
            payload_cr: format!("{:.6}", r.payload_cr),
            file_cr: format!("{:.6}", r.file_cr),
            psnr_db: format_db(r.psnr_db),
            improvement_pct: row
                .improvement_pct
                .map(|v| format!("{v:.4}"))
                .unwrap_or_default(),
        })
        .map_err(to_io)?;
    }
    w.flush().map_err(|e| Error::io("writing CSV", e))?;
    Ok(())
}
