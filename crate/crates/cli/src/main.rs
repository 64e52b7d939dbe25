use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hjpeg::bench::{self, BenchOptions, CorpusImage};
use hjpeg::container::StreamCodeBook;
use hjpeg::{codec, image_io, CodecConfig, CompressedFile, Error, ErrorClass, Execution};

#[derive(Parser)]
#[command(
    name = "hjpeg",
    version,
    about = "Block-DCT grayscale codec with Huffman or symbol-reduced entropy coding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Entropy {
    /// one coefficient per Huffman symbol
    Huffman,
    /// groups of `--group-size` coefficients per symbol
    Reduced,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a PGM image
    Compress {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = Entropy::Reduced)]
        entropy: Entropy,
        /// Coefficients per composite symbol (reduced mode only) [default: 4]
        #[arg(long)]
        group_size: Option<usize>,
        /// Code DC coefficients as differences from the previous block
        #[arg(long)]
        dc_diff: bool,
    },
    /// Decompress to a binary PGM
    Decompress { input: PathBuf, output: PathBuf },
    /// Print header fields and codebook statistics
    Inspect { input: PathBuf },
    /// Run every image under scalar and reduced coding
    Bench {
        /// Directory of .pgm files, or `synthetic`
        #[arg(long, default_value = "synthetic")]
        corpus: String,
        /// CSV destination; printed to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Group sizes for the reduced runs
        #[arg(long, value_delimiter = ',', default_value = "4")]
        group_size: Vec<usize>,
        /// Spread work across threads
        #[arg(long)]
        parallel: bool,
    },
}

fn read(path: &Path) -> hjpeg::Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn write(path: &Path, bytes: &[u8]) -> hjpeg::Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn display_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn compress(
    input: &Path,
    output: &Path,
    entropy: Entropy,
    group_size: Option<usize>,
    dc_diff: bool,
) -> hjpeg::Result<()> {
    let cfg = match (entropy, group_size) {
        (Entropy::Huffman, Some(_)) => {
            return Err(Error::Config(
                "--group-size only applies to --entropy reduced".into(),
            ))
        }
        (Entropy::Huffman, None) => CodecConfig::scalar(),
        (Entropy::Reduced, g) => {
            CodecConfig::reduced(g.unwrap_or(hjpeg::entropy::DEFAULT_GROUP_SIZE))
        }
    }
    .with_dc_diff(dc_diff);
    cfg.validate()?;
    let img = image_io::read_pgm(&read(input)?)?;
    let bytes = codec::compress(&img, &cfg)?.serialize()?;
    write(output, &bytes)?;
    let (report, _) = bench::evaluate_bytes(&display_name(input), &img, &cfg, &bytes)?;
    println!("{report}");
    Ok(())
}

fn decompress(input: &Path, output: &Path) -> hjpeg::Result<()> {
    let file = CompressedFile::deserialize(&read(input)?)?;
    let img = codec::decompress(&file)?;
    write(output, &image_io::write_pgm(&img))
}

fn inspect(input: &Path) -> hjpeg::Result<()> {
    let bytes = read(input)?;
    let f = CompressedFile::deserialize(&bytes)?;
    let mode = match f.codebook {
        StreamCodeBook::Scalar(_) => "scalar",
        StreamCodeBook::Reduced { .. } => "reduced",
    };
    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("{k:<20}{v}\n"));
    line("file_bytes", bytes.len().to_string());
    line("flags", format!("{:#04x}", f.flags()));
    line("mode", mode.into());
    line("group_size", f.group_size().to_string());
    line("dc_diff", u8::from(f.dc_diff).to_string());
    line("orig_size", format!("{}x{}", f.orig_width, f.orig_height));
    line(
        "padded_size",
        format!("{}x{}", f.padded_width, f.padded_height),
    );
    line("pad_count", f.pad_count.to_string());
    line("symbol_count", f.symbol_count.to_string());
    line("payload_bits", f.payload_bit_length().to_string());
    line("codebook_entries", f.codebook.len().to_string());
    line("kraft_sum", format!("{:.6}", f.codebook.kraft_sum()));
    let hist: Vec<String> = f
        .codebook
        .length_histogram()
        .iter()
        .map(|(len, n)| format!("{len}:{n}"))
        .collect();
    line("code_lengths", hist.join(" "));
    print!("{out}");
    Ok(())
}

fn run_bench(
    corpus: &str,
    out: Option<&Path>,
    group_sizes: Vec<usize>,
    parallel: bool,
) -> hjpeg::Result<()> {
    let images: Vec<CorpusImage> = if corpus == "synthetic" {
        bench::synthetic_corpus(256)
    } else {
        bench::load_corpus_dir(Path::new(corpus))?
    };
    let opts = BenchOptions {
        group_sizes,
        execution: if parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        },
    };
    let result = bench::run_bench(&images, &opts)?;
    match out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
            bench::write_csv(std::io::BufWriter::new(file), &result.rows)?;
            for row in &result.rows {
                println!("{}", row.report);
            }
        }
        None => bench::write_csv(std::io::stdout().lock(), &result.rows)?,
    }
    if !result.violations.is_empty() {
        return Err(Error::Invariant(result.violations.join("; ")));
    }
    Ok(())
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Usage => 1,
        ErrorClass::Io => 2,
        ErrorClass::Format => 3,
        ErrorClass::Invariant => 4,
    }
}

fn class_name(class: ErrorClass) -> &'static str {
    match class {
        ErrorClass::Usage => "usage",
        ErrorClass::Io => "io",
        ErrorClass::Format => "format",
        ErrorClass::Invariant => "invariant",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(exit_code(ErrorClass::Usage));
        }
    };
    let result = match cli.command {
        Command::Compress {
            input,
            output,
            entropy,
            group_size,
            dc_diff,
        } => compress(&input, &output, entropy, group_size, dc_diff),
        Command::Decompress { input, output } => decompress(&input, &output),
        Command::Inspect { input } => inspect(&input),
        Command::Bench {
            corpus,
            out,
            group_size,
            parallel,
        } => run_bench(&corpus, out.as_deref(), group_size, parallel),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let class = e.class();
            let _ = std::io::stdout().flush();
            eprintln!("error[{}:{}]: {e}", class_name(class), e.tag());
            ExitCode::from(exit_code(class))
        }
    }
}
