use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::rngs::OsRng;

use orbithop::analysis::{chi_square_uniform, monobit_and_runs, Histogram};
use orbithop::{generate_key, CipherSession, Generator, KeyMaterial, MapBank};

mod selftest;

/// Multi-map orbit-hopping chaotic stream cipher.
///
/// Keys are read from files only, never from the command line.
#[derive(Parser, Debug)]
#[command(name = "orbithop", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random key for 2-8 maps.
    Keygen {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=8))]
        maps: u8,
        /// Output path, or '-' for stdout.
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Print the decoded per-map parameters of a key.
    InspectKey {
        #[command(flatten)]
        key: KeyArgs,
    },
    /// Write raw keystream bytes.
    Keystream {
        #[command(flatten)]
        key: KeyArgs,
        #[arg(long)]
        count: u64,
        /// Lowercase hex, 32 bytes per line.
        #[arg(long)]
        hex: bool,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// XOR a file with the keystream.
    Encrypt(TransformArgs),
    /// XOR a file with the keystream (identical to encrypt).
    Decrypt(TransformArgs),
    /// Byte histogram CSV plus uniformity, monobit and runs reports.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check the implementation against the worked example.
    Selftest,
}

#[derive(Args, Debug)]
struct KeyArgs {
    #[arg(long)]
    key_file: PathBuf,
    /// Map bank configuration; defaults to the built-in eight-map bank.
    #[arg(long)]
    bank: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[command(flatten)]
    key: KeyArgs,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn open_input(path: &Path) -> CliResult<Box<dyn Read>> {
    if is_stdio(path) {
        Ok(Box::new(io::stdin().lock()))
    } else {
        let f = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(Box::new(BufReader::new(f)))
    }
}

fn open_output(path: &Path) -> CliResult<Box<dyn Write>> {
    if is_stdio(path) {
        Ok(Box::new(io::stdout().lock()))
    } else {
        let f = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(Box::new(BufWriter::new(f)))
    }
}

impl KeyArgs {
    fn load(&self) -> CliResult<(KeyMaterial, MapBank)> {
        let text = fs::read_to_string(&self.key_file)
            .map_err(|e| format!("{}: {e}", self.key_file.display()))?;
        let key = KeyMaterial::from_hex(&text)?;
        key.parse()?;
        let bank = match &self.bank {
            Some(path) => {
                let text =
                    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                MapBank::parse_config(&text)?
            }
            None => MapBank::default(),
        };
        Ok((key, bank))
    }
}

fn keygen(maps: u8, out: &Path) -> CliResult<()> {
    let key = generate_key(usize::from(maps), &mut OsRng)?;
    let mut w = open_output(out)?;
    writeln!(w, "{key}")?;
    w.flush()?;
    Ok(())
}

fn inspect_key(args: &KeyArgs) -> CliResult<()> {
    let (key, bank) = args.load()?;
    let generator = Generator::new(&key, &bank)?;
    let mut out = io::stdout().lock();
    writeln!(out, "maps: {}", generator.slots().len())?;
    writeln!(
        out,
        "{:<8} {:<14} {:<14} {:>8} {:>7} {:>8}  map",
        "", "seed", "offset", "#settles", "#orbits", "#samples"
    )?;
    for (i, slot) in generator.slots().iter().enumerate() {
        let p = &slot.params;
        writeln!(
            out,
            "{:<8} {:<14} {:<14} {:>8} {:>7} {:>8}  {}",
            format!("Map #{i}"),
            p.seed_decimal(),
            p.offset_decimal(),
            p.settles,
            p.orbits,
            p.samples,
            slot.spec
        )?;
    }
    writeln!(out, "bytes per round: {}", generator.bytes_per_round())?;
    Ok(())
}

fn keystream(args: &KeyArgs, count: u64, hex: bool, out: &Path) -> CliResult<()> {
    let (key, bank) = args.load()?;
    let mut generator = Generator::new(&key, &bank)?;
    let mut w = open_output(out)?;
    let mut remaining = count;
    let mut buf = vec![0u8; 64 * 1024];
    while remaining > 0 {
        let n = remaining.min(buf.len() as u64) as usize;
        generator.fill(&mut buf[..n])?;
        if hex {
            for line in buf[..n].chunks(32) {
                for b in line {
                    write!(w, "{b:02x}")?;
                }
                writeln!(w)?;
            }
        } else {
            w.write_all(&buf[..n])?;
        }
        remaining -= n as u64;
    }
    w.flush()?;
    Ok(())
}

fn transform(args: &TransformArgs) -> CliResult<()> {
    let (key, bank) = args.key.load()?;
    let mut session = CipherSession::new(&key, &bank)?;
    let reader = open_input(&args.input)?;
    let writer = open_output(&args.out)?;
    session.apply_stream(reader, writer)?;
    Ok(())
}

fn analyze(input: &Path, csv: Option<&Path>) -> CliResult<()> {
    let mut data = Vec::new();
    open_input(input)?.read_to_end(&mut data)?;
    let hist = Histogram::from_bytes(&data);

    let mut report = String::new();
    report.push_str(&format!("bytes: {}\n", hist.total()));
    match chi_square_uniform(&hist) {
        Ok(r) => report.push_str(&format!("{r}\n")),
        Err(e) => report.push_str(&format!("chi-square uniformity: skipped ({e})\n")),
    }
    match monobit_and_runs(&data) {
        Ok(r) => report.push_str(&format!("{r}\n")),
        Err(e) => report.push_str(&format!("monobit/runs: skipped ({e})\n")),
    }

    match csv {
        Some(path) => {
            let mut w = open_output(path)?;
            hist.write_csv(&mut w)?;
            w.flush()?;
            print!("{report}");
        }
        None => {
            // CSV owns stdout; reports go to stderr.
            let mut out = io::stdout().lock();
            hist.write_csv(&mut out)?;
            out.flush()?;
            eprint!("{report}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Keygen { maps, out } => keygen(maps, &out)?,
        Command::InspectKey { key } => inspect_key(&key)?,
        Command::Keystream {
            key,
            count,
            hex,
            out,
        } => keystream(&key, count, hex, &out)?,
        Command::Encrypt(args) | Command::Decrypt(args) => transform(&args)?,
        Command::Analyze { input, csv } => analyze(&input, csv.as_deref())?,
        Command::Selftest => {
            let results = selftest::run_all();
            let mut out = io::stdout().lock();
            for r in &results {
                writeln!(out, "{r}")?;
            }
            let passed = results.iter().filter(|r| r.passed).count();
            writeln!(out, "{passed}/{} checks passed", results.len())?;
            return Ok(passed == results.len());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("orbithop: error: {e}");
            ExitCode::FAILURE
        }
    }
}
