use clap::{Parser, Subcommand};

use seqconv::cli::{run, Command};

#[derive(Parser)]
#[command(name = "seqconv", version, about = "Exact convolutions of d'Alembertian and Liouvillian sequences")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Terms 0..=N of a sequence expression.
    Eval {
        expr: String,
        #[arg(long, default_value_t = 10)]
        terms: u64,
    },
    /// Generating series truncated after x^N.
    Gseries {
        expr: String,
        #[arg(long, default_value_t = 10)]
        terms: u64,
    },
    /// Representation and annihilator of a convolution.
    Convolve {
        a: String,
        b: String,
        #[arg(long)]
        rep: bool,
        #[arg(long)]
        ann: bool,
    },
    /// Annihilator of an expression, or of the convolution of two.
    Annihilate { a: String, b: Option<String> },
    /// Least common left multiple of two operators.
    Lclm { op1: String, op2: String },
    /// Cofactor operator for a hyperexponential left operand.
    Hyperexpfactor {
        #[arg(long)]
        op: String,
        #[arg(long)]
        rate: String,
        #[arg(long)]
        reduce: bool,
    },
    /// Checks an operator against a sequence termwise.
    Verify {
        #[arg(long)]
        op: String,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, default_value_t = 30, allow_hyphen_values = true)]
        to: i64,
    },
}

fn main() {
    let cli = Cli::parse();
    std::panic::set_hook(Box::new(|_| {}));
    let cmd = match cli.cmd {
        Sub::Eval { expr, terms } => Command::Eval { expr, n: terms },
        Sub::Gseries { expr, terms } => Command::GSeries { expr, n: terms },
        Sub::Convolve { a, b, rep, ann } => Command::Convolve { expr_a: a, expr_b: b, want_rep: rep, want_ann: ann },
        Sub::Annihilate { a, b } => Command::Annihilate { expr_a: a, expr_b: b },
        Sub::Lclm { op1, op2 } => Command::Lclm { op1, op2 },
        Sub::Hyperexpfactor { op, rate, reduce } => Command::HyperExpFactor { op, rate, reduce },
        Sub::Verify { op, expr, from, to } => Command::Verify { op, expr, from, to },
    };
    let report = run(&cmd);
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    std::process::exit(report.exit_code());
}
