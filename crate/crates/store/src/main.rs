use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rank3::generation::{GenOptions, PruneOptions};
use rank3::represent::{default_battery, parse_battery};
use rank3::MultiplicityVector;
use rank3_store::{
    classify_all, generate_into, read_file, stats, terao_pipeline, tutte_unique_within, write_file, ClassifyOptions,
    GenTarget, Query, RecordWriter,
};

/// Generate, classify and query rank-3 simple matroids.
#[derive(Parser)]
#[command(name = "rank3", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StorePath {
    /// Record file.
    #[arg(long = "in", env = "RANK3_STORE")]
    path: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate all nonisomorphic matroids of one size or one multiplicity vector.
    Gen {
        #[arg(long)]
        n: usize,
        /// Dense multiplicity vector m2,m3,...
        #[arg(long, value_delimiter = ',')]
        mv: Option<Vec<usize>>,
        /// Only multiplicity vectors with an integrally splitting χ.
        #[arg(long)]
        int_split: bool,
        /// 0 evaluates on the calling thread in a fixed order.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Leaf queue capacity; unbounded when absent.
        #[arg(long)]
        fifo_capacity: Option<usize>,
        #[arg(long)]
        no_prune_parity: bool,
        #[arg(long)]
        no_prune_balance: bool,
        #[arg(long)]
        no_prune_capacity: bool,
        #[arg(long)]
        no_prune_twins: bool,
        /// Keep the records already in the file.
        #[arg(long)]
        append: bool,
        #[arg(long, env = "RANK3_STORE")]
        out: PathBuf,
    },
    /// Fill in flags and representability, rewriting the file in place.
    Classify {
        #[command(flatten)]
        store: StorePath,
        /// Field orders, e.g. 2,3,4,5.
        #[arg(long)]
        battery: Option<String>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Rank-2 deletions do not count as inductively free.
        #[arg(long)]
        strict_if: bool,
        /// Recompute records that are already classified.
        #[arg(long)]
        force: bool,
    },
    /// Print the records matching an expression, or their number.
    Query {
        #[command(flatten)]
        store: StorePath,
        #[arg(long = "where")]
        expr: String,
        #[arg(long)]
        count: bool,
    },
    /// Stage counts of the filter for counterexamples to Terao's conjecture.
    Terao {
        #[command(flatten)]
        store: StorePath,
        #[arg(long)]
        n: usize,
    },
    /// Per-size counts.
    Stats {
        #[command(flatten)]
        store: StorePath,
    },
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Gen {
            n,
            mv,
            int_split,
            workers,
            fifo_capacity,
            no_prune_parity,
            no_prune_balance,
            no_prune_capacity,
            no_prune_twins,
            append,
            out,
        } => {
            let target = match mv {
                Some(dense) => GenTarget::Vector(
                    MultiplicityVector::from_dense(n, &dense).with_context(|| format!("--mv {dense:?}"))?,
                ),
                None => GenTarget::Size { n, int_split },
            };
            let opts = GenOptions {
                workers,
                fifo_capacity,
                drain_leaf_runs: false,
                prune: PruneOptions {
                    parity: !no_prune_parity,
                    atom_balance: !no_prune_balance,
                    capacity: !no_prune_capacity,
                    twins: !no_prune_twins,
                },
            };
            gen(&target, &opts, append, &out)
        }
        Command::Classify {
            store,
            battery,
            workers,
            strict_if,
            force,
        } => {
            let mut records = read_file(&store.path)?;
            let opts = ClassifyOptions {
                battery: match battery {
                    Some(b) => parse_battery(&b)?,
                    None => default_battery(),
                },
                strict_inductive: strict_if,
                workers,
                force,
            };
            let done = classify_all(&mut records, &opts);
            write_file(&store.path, &records)?;
            println!("classified {done} of {} records", records.len());
            Ok(())
        }
        Command::Query { store, expr, count } => {
            let q = Query::parse(&expr)?;
            let records = read_file(&store.path)?;
            let out = std::io::stdout().lock();
            if count {
                writeln!(&mut { out }, "{}", rank3_store::count(&records, &q))?;
            } else {
                rank3_store::write_records(BufWriter::new(out), rank3_store::query(&records, &q))?;
            }
            Ok(())
        }
        Command::Terao { store, n } => {
            let records = read_file(&store.path)?;
            let r = terao_pipeline(&records, n)?;
            println!("n={n}");
            println!("integrally splitting      {}", r.int_split);
            println!("representable (battery)   {}", r.representable);
            println!("thereof not ind. free     {}", r.not_inductively_free);
            println!("thereof strongly balanced {}", r.strongly_balanced);
            for s in &r.survivors {
                println!("{}", serde_json::to_string(&s.blocks)?);
            }
            Ok(())
        }
        Command::Stats { store } => {
            let records = read_file(&store.path)?;
            println!("n\ttotal\tint_split\tclassified\tSS\tIF\tDF\trep\tT-unique");
            for s in stats(&records) {
                let tu = tutte_unique_within(&records, s.n)?;
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    s.n,
                    s.total,
                    s.int_split,
                    s.classified,
                    s.supersolvable,
                    s.inductively_free,
                    s.divisionally_free,
                    s.representable,
                    tu
                );
            }
            Ok(())
        }
    }
}

fn gen(target: &GenTarget, opts: &GenOptions, append: bool, out: &Path) -> Result<()> {
    let existing = if append && out.exists() { read_file(out)? } else { Vec::new() };
    let mut name = out.file_name().context("--out needs a file name")?.to_os_string();
    name.push(".tmp");
    let tmp = out.with_file_name(name);
    let mut writer = RecordWriter::new(BufWriter::new(File::create(&tmp)?));
    let written = (|| -> Result<usize> {
        for r in &existing {
            writer.push(r)?;
        }
        Ok(generate_into(target, opts, &mut writer)?)
    })();
    let written = match written {
        Ok(w) => w,
        Err(e) => {
            let _ = std::fs::remove_file(&tmp);
            return Err(e);
        }
    };
    writer.finish()?.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    std::fs::rename(&tmp, out)?;
    println!("wrote {written} records to {}", out.display());
    Ok(())
}
