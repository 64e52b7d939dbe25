use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hjpeg::image_io::{generate_test_image, read_pgm, write_pgm, TestPattern};
use hjpeg::{codec, CodecConfig, CompressedFile};

fn hjpeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hjpeg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn sample_pgm(dir: &Path) -> PathBuf {
    let path = dir.join("in.pgm");
    let img = generate_test_image(TestPattern::Noise, 37, 21, 5);
    std::fs::write(&path, write_pgm(&img)).unwrap();
    path
}

#[test]
fn compress_decompress_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_pgm(dir.path());
    let packed = dir.path().join("out.hjpg");
    let restored = dir.path().join("out.pgm");

    let o = hjpeg(&[
        "compress",
        s(&input),
        s(&packed),
        "--group-size",
        "8",
        "--dc-diff",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = String::from_utf8(o.stdout).unwrap();
    assert!(
        report.starts_with("in mode=reduced g=8 dc_diff=1 "),
        "{report}"
    );

    let img = read_pgm(&std::fs::read(&input).unwrap()).unwrap();
    let cfg = CodecConfig::reduced(8).with_dc_diff(true);
    let expected = codec::compress(&img, &cfg).unwrap().serialize().unwrap();
    assert_eq!(std::fs::read(&packed).unwrap(), expected);

    let o = hjpeg(&["decompress", s(&packed), s(&restored)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let back = read_pgm(&std::fs::read(&restored).unwrap()).unwrap();
    let file = CompressedFile::deserialize(&expected).unwrap();
    assert_eq!(back, codec::decompress(&file).unwrap());
}

#[test]
fn huffman_and_reduced_decode_identically() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_pgm(dir.path());
    let mut outputs = Vec::new();
    for (i, extra) in [&["--entropy", "huffman"][..], &["--entropy", "reduced"][..]]
        .iter()
        .enumerate()
    {
        let packed = dir.path().join(format!("{i}.hjpg"));
        let restored = dir.path().join(format!("{i}.pgm"));
        let mut args = vec!["compress", s(&input), s(&packed)];
        args.extend_from_slice(extra);
        assert!(hjpeg(&args).status.success());
        assert!(hjpeg(&["decompress", s(&packed), s(&restored)])
            .status
            .success());
        outputs.push(std::fs::read(&restored).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn inspect_reports_header() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_pgm(dir.path());
    let packed = dir.path().join("x.hjpg");
    assert!(
        hjpeg(&["compress", s(&input), s(&packed), "--entropy", "huffman"])
            .status
            .success()
    );
    let o = hjpeg(&["inspect", s(&packed)]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for needle in [
        "mode                scalar",
        "group_size          1",
        "orig_size           37x21",
        "padded_size         40x24",
        "symbol_count        960",
        "kraft_sum           1.000000",
    ] {
        assert!(text.contains(needle), "missing {needle:?} in\n{text}");
    }
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    for (i, kind) in TestPattern::ALL.iter().enumerate() {
        let img = generate_test_image(*kind, 24, 16, i as u64);
        std::fs::write(corpus.join(format!("{}.pgm", kind.name())), write_pgm(&img)).unwrap();
    }
    let csv = dir.path().join("r.csv");
    let o = hjpeg(&[
        "bench",
        "--corpus",
        s(&corpus),
        "--out",
        s(&csv),
        "--group-size",
        "2,4",
        "--parallel",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "image,mode,group_size,dc_diff,entropy_bits,l_avg,payload_cr,file_cr,psnr_db,improvement_pct"
    );
    // 3 images × 2 dc settings × (scalar + 2 group sizes)
    assert_eq!(lines.count(), 18);
    assert!(text.contains("\nchecker,scalar,1,0,"));

    let o = hjpeg(&["bench"]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("synthetic-noise,reduced,4,1,"));
}

#[test]
fn exit_codes_by_error_class() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_pgm(dir.path());
    let out = dir.path().join("o");

    let o = hjpeg(&["compress"]);
    assert_eq!(o.status.code(), Some(1));
    let o = hjpeg(&["compress", s(&input), s(&out), "--group-size", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[usage:"), "{}", stderr(&o));

    let o = hjpeg(&["decompress", s(&dir.path().join("missing")), s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[io:io]: "));

    let o = hjpeg(&["inspect", s(&input)]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr(&o).lines().count(), 1);
    assert!(stderr(&o).starts_with("error[format:bad-magic]: "));

    let o = hjpeg(&[
        "bench",
        "--corpus",
        s(dir.path().join("nothing-here").as_path()),
    ]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(hjpeg(&["--help"]).status.code(), Some(0));
}

#[test]
fn truncated_file_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_pgm(dir.path());
    let packed = dir.path().join("x.hjpg");
    assert!(hjpeg(&["compress", s(&input), s(&packed)]).status.success());
    let bytes = std::fs::read(&packed).unwrap();
    std::fs::write(&packed, &bytes[..bytes.len() / 2]).unwrap();
    let o = hjpeg(&["decompress", s(&packed), s(&dir.path().join("y.pgm"))]);
    assert_eq!(o.status.code(), Some(3));
    assert!(
        stderr(&o).starts_with("error[format:truncated]: "),
        "{}",
        stderr(&o)
    );
}
