//! Command-line interface for the conjugate-orbit toolkit.
//!
//! Exit codes: 0 when the requested computation produced an answer (even a
//! negative one, such as "not a member"), 1 when a verification failed or
//! an input was rejected, 2 for command-line usage errors (clap's default).

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use conjorbit::complexify::{
    block_conjugation_check, clinear_pattern_residual, conjugation_blocks, jhat_flip_residual,
    orbit_via_blocks, wblock_generate, Realification,
};
use conjorbit::conjugations::{random_conjugation, Conjugation};
use conjorbit::numerics::{haar_unitary, unitarity_residual, vec_max_abs_diff, CMatrix, RMatrix};
use conjorbit::orbit::{adjoint_witness, cuc, diag_in_orbit, same_member};
use conjorbit::shift::{
    diagonal_factor, hankel_flip, householder_block_factor, identity_factor, shift_orbit_member,
    window_basis, window_shift, WindowOp,
};
use conjorbit::transforms::{
    fourier_apply, hermite_basis, hilbert_apply_pv, hilbert_gram, hilbert_vector,
    sigma_diagonal_member, LineGrid,
};
use conjorbit::Complex64;
use conjorbit_cli::files::{load_matrix, parse_permutation, save_matrix};
use conjorbit_cli::suite::{member_from_factor, run_suite};
use conjorbit_cli::symbolspec::SymbolSpec;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "conjorbit",
    version,
    about = "Conjugate orbits of unitary operators: generators, membership checks, and the verification suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate reproducible inputs (matrix JSON files).
    #[command(subcommand)]
    Gen(GenCommand),
    /// Orbit membership: witnesses, members, and decision procedures.
    #[command(subcommand)]
    Orbit(OrbitCommand),
    /// Banded window factors around the two-sided shift.
    #[command(subcommand)]
    Shift(ShiftCommand),
    /// Multiplication symbols on the circle.
    #[command(subcommand)]
    Symbol(SymbolCommand),
    /// Fourier and Hilbert transform models on the line.
    #[command(subcommand)]
    Transforms(TransformsCommand),
    /// Realification: 2n-dimensional real pictures of orbits.
    #[command(subcommand)]
    Complexify(ComplexifyCommand),
    /// Run the full verification suite and print the report.
    Suite {
        /// Seed for all randomized draws in the suite.
        #[arg(long, default_value_t = 20260815)]
        seed: u64,
        /// Write the canonical JSON report (wall-clock fields zeroed) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Draw a random symmetric unitary matrix (V·Vᵗ for Haar V).
    SymUnitary {
        /// Matrix dimension.
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path (default sym-unitary-N-seedS.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a random conjugation and store its symmetric factor.
    Conjugation {
        /// Matrix dimension.
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path (default conjugation-N-seedS.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OrbitCommand {
    /// Build the eigenbasis conjugation sending U to U*, write its
    /// symmetric factor, and verify the landing residual.
    AdjointWitness {
        /// Matrix JSON file holding the unitary U.
        unitary: PathBuf,
        /// Output path for the witness factor (default INPUT.witness.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conjugate U by the conjugation with the given symmetric factor.
    Member {
        /// Matrix JSON file holding the unitary U.
        unitary: PathBuf,
        /// Matrix JSON file holding the symmetric unitary factor S.
        factor: PathBuf,
        /// Optional output path for the orbit member C U C.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether diag(conj(λ) ∘ ordering) is an orbit member of U.
    DiagCheck {
        /// Matrix JSON file holding the unitary U.
        unitary: PathBuf,
        /// 1-based ordering of the angle-sorted eigenvalues, e.g. 1,3,2.
        #[arg(long)]
        perm: String,
    },
    /// Decide whether two factors produce the same orbit member of U.
    SameMember {
        /// Matrix JSON file holding the unitary U.
        unitary: PathBuf,
        /// First symmetric factor file.
        factor1: PathBuf,
        /// Second symmetric factor file.
        factor2: PathBuf,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum ShiftKind {
    /// Index-flip factor: the member is the adjoint shift.
    Hankel,
    /// Identity factor: plain conjugation fixes the real shift.
    Identity,
    /// Diagonal phase factor.
    Diag,
    /// Householder block factor.
    Blocks,
}

#[derive(Subcommand)]
enum ShiftCommand {
    /// Conjugate the two-sided shift by a window factor and verify the
    /// resulting orbit member on the core of the window.
    Demo {
        /// Which factor family to demonstrate.
        #[arg(long, value_enum)]
        kind: ShiftKind,
        /// Window half-width N (indices −N..N); at least 8.
        #[arg(long, default_value_t = 64)]
        window: i64,
    },
}

#[derive(Subcommand)]
enum SymbolCommand {
    /// Decide orbit membership of multiplication by the symbol described
    /// in a piecewise-map spec file.
    Decide {
        /// JSON spec file: {breakpoints, pieces} with closed-form tags.
        #[arg(long)]
        spec: PathBuf,
        /// Circle grid size (a power of two, at least 512).
        #[arg(long, default_value_t = 16384, value_parser = parse_grid)]
        grid: usize,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum TransformKind {
    Fourier,
    Hilbert,
}

#[derive(Subcommand)]
enum TransformsCommand {
    /// Verify a transform's eigenrelations and its diagonal orbit model.
    Verify {
        /// Which transform to verify.
        #[arg(long, value_enum)]
        which: TransformKind,
        /// Largest order checked (Fourier: Hermite index ≤ 20; Hilbert:
        /// Cauchy-kernel order window, ≤ 8).
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
}

#[derive(Subcommand)]
enum ComplexifyCommand {
    /// Realify U over its adjoint witness and verify the block identities
    /// and the real-route orbit members.
    Run {
        /// Matrix JSON file holding the unitary U.
        unitary: PathBuf,
        /// Seed for the random W-blocks and the block-anatomy example.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn parse_grid(text: &str) -> Result<usize, String> {
    let g: usize = text.parse().map_err(|_| format!("{text:?} is not a grid size"))?;
    if !g.is_power_of_two() || g < 512 {
        return Err(format!("grid size must be a power of two ≥ 512, got {g}"));
    }
    Ok(g)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_unitary(path: &PathBuf) -> Result<CMatrix> {
    let m = load_matrix(path)?;
    if !m.is_square() {
        bail!("{}: matrix is {}x{}, not square", path.display(), m.rows(), m.cols());
    }
    let r = unitarity_residual(&m);
    if r > 1e-8 {
        bail!("{}: matrix is not unitary (residual {r:.3e})", path.display());
    }
    Ok(m)
}

fn verdict(name: &str, residual: f64, tol: f64) -> bool {
    let ok = residual <= tol;
    println!(
        "{name:<46} {residual:>12.3e}  (tol {tol:.1e})  {}",
        if ok { "pass" } else { "FAIL" }
    );
    ok
}

fn exit_on(all_ok: bool) -> ExitCode {
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen(cmd) => run_gen(cmd),
        Command::Orbit(cmd) => run_orbit(cmd),
        Command::Shift(cmd) => run_shift(cmd),
        Command::Symbol(cmd) => run_symbol(cmd),
        Command::Transforms(cmd) => run_transforms(cmd),
        Command::Complexify(cmd) => run_complexify(cmd),
        Command::Suite { seed, out } => {
            let report = run_suite(seed);
            print!("{}", report.table());
            if let Some(path) = out {
                std::fs::write(&path, report.canonical_json() + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("report written to {}", path.display());
            }
            Ok(exit_on(report.passed()))
        }
    }
}

fn run_gen(cmd: GenCommand) -> Result<ExitCode> {
    match cmd {
        GenCommand::SymUnitary { n, seed, out } => {
            if n == 0 {
                bail!("dimension must be positive");
            }
            let v = haar_unitary(n, seed);
            let s = v.matmul(&v.transpose());
            let out = out.unwrap_or_else(|| PathBuf::from(format!("sym-unitary-{n}-seed{seed}.json")));
            save_matrix(&out, &s)?;
            println!(
                "wrote {n}x{n} symmetric unitary (seed {seed}, symmetry residual {:.3e}, \
                 unitarity residual {:.3e}) to {}",
                s.symmetry_residual(),
                unitarity_residual(&s),
                out.display()
            );
        }
        GenCommand::Conjugation { n, seed, out } => {
            if n == 0 {
                bail!("dimension must be positive");
            }
            let c = random_conjugation(n, seed);
            let out = out.unwrap_or_else(|| PathBuf::from(format!("conjugation-{n}-seed{seed}.json")));
            save_matrix(&out, c.factor())?;
            println!(
                "wrote {n}x{n} symmetric factor (seed {seed}, symmetry residual {:.3e}, \
                 involution residual {:.3e}) to {}",
                c.factor().symmetry_residual(),
                c.involution_residual(),
                out.display()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_orbit(cmd: OrbitCommand) -> Result<ExitCode> {
    match cmd {
        OrbitCommand::AdjointWitness { unitary, out } => {
            let u = load_unitary(&unitary)?;
            let c = adjoint_witness(&u)?;
            let member = cuc(&c, &u)?.matrix;
            let residual = member.max_abs_diff(&u.adjoint());
            let ok = verdict("adjoint witness lands on U*", residual, 1e-8);
            let out = out.unwrap_or_else(|| unitary.with_extension("witness.json"));
            save_matrix(&out, c.factor())?;
            println!("witness factor written to {}", out.display());
            Ok(exit_on(ok))
        }
        OrbitCommand::Member { unitary, factor, out } => {
            let u = load_unitary(&unitary)?;
            let s = load_matrix(&factor)?;
            let (member, agreement) = member_from_factor(s, &u)?;
            println!("orbit member C U C computed ({}x{})", member.rows(), member.cols());
            println!("route agreement (conjugation vs S·conj(U)·conj(S)): {agreement:.3e}");
            println!("member unitarity residual: {:.3e}", unitarity_residual(&member));
            if let Some(path) = out {
                save_matrix(&path, &member)?;
                println!("member written to {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        OrbitCommand::DiagCheck { unitary, perm } => {
            let u = load_unitary(&unitary)?;
            let ordering = parse_permutation(&perm)?;
            if ordering.len() != u.rows() {
                bail!(
                    "ordering has {} entries but the matrix is {}x{}",
                    ordering.len(),
                    u.rows(),
                    u.cols()
                );
            }
            let member = diag_in_orbit(&u, &ordering)?;
            println!(
                "diag(conj(lambda) o ordering) {} an orbit member of U",
                if member { "IS" } else { "is NOT" }
            );
            Ok(ExitCode::SUCCESS)
        }
        OrbitCommand::SameMember { unitary, factor1, factor2 } => {
            let u = load_unitary(&unitary)?;
            let c1 = Conjugation::from_symmetric(load_matrix(&factor1)?, 1e-8)?;
            let c2 = Conjugation::from_symmetric(load_matrix(&factor2)?, 1e-8)?;
            let m1 = cuc(&c1, &u)?.matrix;
            let m2 = cuc(&c2, &u)?.matrix;
            let diff = m1.max_abs_diff(&m2);
            println!(
                "members {} (max entry difference {diff:.3e}, threshold 1e-10)",
                if same_member(&c1, &c2, &u)? { "COINCIDE" } else { "differ" }
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Worst core disagreement between the action-defined member and the
/// explicit composition S · M · conj(S) (the shift matrix is real, so the
/// inner conjugation leaves it unchanged).
fn dual_route_worst(v: &WindowOp, member: &WindowOp) -> f64 {
    let n = v.half_width();
    let composed = v
        .matrix()
        .matmul(window_shift(n).matrix())
        .matmul(&v.matrix().conj());
    let mut worst: f64 = 0.0;
    for j in -member.core_radius()..=member.core_radius() {
        let e = window_basis(n, j);
        worst = worst.max(vec_max_abs_diff(&member.matrix().matvec(&e), &composed.matvec(&e)));
    }
    worst
}

/// Worst deviation of `member v_j = v_{j+1}` over the core columns of the
/// factor (the defining relation of a shift orbit member).
fn relabeled_basis_worst(v: &WindowOp, member: &WindowOp) -> f64 {
    let last = member.core_radius().min(v.half_width() - 1);
    let mut worst: f64 = 0.0;
    for j in -member.core_radius()..=last {
        worst = worst.max(vec_max_abs_diff(
            &member.apply(&v.column_of(j)),
            &v.column_of(j + 1),
        ));
    }
    worst
}

fn run_shift(cmd: ShiftCommand) -> Result<ExitCode> {
    let ShiftCommand::Demo { kind, window } = cmd;
    if window < 8 {
        bail!("window half-width must be at least 8");
    }
    let n = window;
    let mut all_ok = true;
    match kind {
        ShiftKind::Hankel => {
            let v = hankel_flip(n);
            let member = shift_orbit_member(&v)?;
            println!(
                "index-flip factor on window {n} (core radius {})",
                member.core_radius()
            );
            let mut worst: f64 = 0.0;
            for j in -member.core_radius()..=member.core_radius() {
                worst = worst.max(vec_max_abs_diff(
                    &member.apply(&window_basis(n, j)),
                    &window_basis(n, j - 1),
                ));
            }
            all_ok &= verdict("member acts as the adjoint shift e_j -> e_{j-1}", worst, 1e-10);
            all_ok &= verdict(
                "member equals the transposed shift matrix",
                member.matrix().max_abs_diff(&window_shift(n).matrix().transpose()),
                1e-10,
            );
            all_ok &= verdict("two routes agree on the core", dual_route_worst(&v, &member), 1e-10);
        }
        ShiftKind::Identity => {
            let v = identity_factor(n);
            let member = shift_orbit_member(&v)?;
            println!(
                "identity factor on window {n} (core radius {})",
                member.core_radius()
            );
            all_ok &= verdict(
                "plain conjugation returns the shift itself",
                member.matrix().max_abs_diff(window_shift(n).matrix()),
                1e-10,
            );
            all_ok &= verdict("two routes agree on the core", dual_route_worst(&v, &member), 1e-10);
        }
        ShiftKind::Diag => {
            let v = diagonal_factor(n, |j| Complex64::from_polar(1.0, 0.37 * j as f64));
            let member = shift_orbit_member(&v)?;
            println!(
                "diagonal phase factor on window {n} (core radius {})",
                member.core_radius()
            );
            all_ok &= verdict(
                "member relabels the conjugated basis v_j -> v_{j+1}",
                relabeled_basis_worst(&v, &member),
                1e-10,
            );
            all_ok &= verdict("two routes agree on the core", dual_route_worst(&v, &member), 1e-10);
        }
        ShiftKind::Blocks => {
            let v = householder_block_factor(n, 1, &[3.0, -1.0, 2.0])?;
            let member = shift_orbit_member(&v)?;
            println!(
                "householder block factor on window {n} (core radius {})",
                member.core_radius()
            );
            all_ok &= verdict(
                "member relabels the conjugated basis v_j -> v_{j+1}",
                relabeled_basis_worst(&v, &member),
                1e-10,
            );
            all_ok &= verdict("two routes agree on the core", dual_route_worst(&v, &member), 1e-10);
        }
    }
    Ok(exit_on(all_ok))
}

fn run_symbol(cmd: SymbolCommand) -> Result<ExitCode> {
    let SymbolCommand::Decide { spec, grid } = cmd;
    let spec = SymbolSpec::load(&spec)?;
    println!("symbol: {}", spec.describe());
    let tol = 1e-3;
    let decision =
        conjorbit::circle::mult_orbit_decision(&spec.to_symbol(), &spec.to_map()?, grid, tol)?;
    let opt = |v: Option<f64>| match v {
        Some(x) => format!("{x:.3e}"),
        None => "-".to_string(),
    };
    let optb = |v: Option<bool>| match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    };
    println!(
        "prescan: range coverage {:.4} (max gap {} bins) {}; injectivity excess {:.4} {}",
        decision.range_coverage,
        decision.range_max_gap,
        if decision.prescan_range_ok { "ok" } else { "REJECTED" },
        decision.injectivity_excess,
        if decision.prescan_injectivity_ok { "ok" } else { "REJECTED" },
    );
    println!("symbol consistency |phi - e^{{-i alpha}}|: {:.3e}", decision.symbol_consistency);
    println!(
        "condition (a) involution: {} (residual {})",
        optb(decision.condition_a),
        opt(decision.involution_residual)
    );
    println!(
        "condition (b) density positive, mass one: {} (min {}, integral {})",
        optb(decision.condition_b),
        opt(decision.density_min),
        opt(decision.density_integral)
    );
    println!(
        "condition (c) density pairing: {} (residual {}, tol {tol:.1e})",
        optb(decision.condition_c),
        opt(decision.pairing_residual)
    );
    println!(
        "multiplication by the symbol {} an orbit member of coordinate multiplication",
        if decision.member { "IS" } else { "is NOT" }
    );
    Ok(ExitCode::SUCCESS)
}

fn run_transforms(cmd: TransformsCommand) -> Result<ExitCode> {
    let TransformsCommand::Verify { which, nmax } = cmd;
    let mut all_ok = true;
    match which {
        TransformKind::Fourier => {
            if nmax > 20 {
                bail!("the pinned quadrature grid resolves Hermite orders up to 20");
            }
            let grid = LineGrid::new(40.0, 4001)?;
            let basis = hermite_basis(&grid, nmax + 1);
            let mut worst: f64 = 0.0;
            for (n, h) in basis.iter().enumerate() {
                let fh = fourier_apply(&grid, h)?;
                let lambda = Complex64::new(0.0, -1.0).powu(n as u32);
                let expect: Vec<Complex64> = h.iter().map(|&v| v * lambda).collect();
                worst = worst.max(grid.max_abs_diff(&fh, &expect));
            }
            all_ok &= verdict(
                &format!("hermite eigenrelation F h_n = (-i)^n h_n, n <= {nmax}"),
                worst,
                1e-6,
            );

            let lo = hermite_basis(&grid, 8);
            let mut combo: Vec<Complex64> = Vec::with_capacity(grid.points());
            for m in 0..grid.points() {
                combo.push(lo[0][m] + lo[3][m] * 0.5 + lo[7][m] * 0.25);
            }
            let mut iterated = combo.clone();
            for _ in 0..4 {
                iterated = fourier_apply(&grid, &iterated)?;
            }
            all_ok &= verdict(
                "fourth power is the identity",
                grid.max_abs_diff(&iterated, &combo),
                1e-6,
            );

            // Smallest pairing-closed order range 0..=K' containing 0..=nmax:
            // the pairing swaps 4m+1 <-> 4m+3, so close out the last group.
            let kk = nmax + (3 - nmax % 4) % 4;
            let ev: Vec<Complex64> =
                (0..=kk).map(|n| Complex64::new(0.0, -1.0).powu(n as u32)).collect();
            let mut sigma: Vec<usize> = (0..=kk).collect();
            let mut m = 0;
            while 4 * m + 3 <= kk {
                sigma.swap(4 * m + 1, 4 * m + 3);
                m += 1;
            }
            let out = sigma_diagonal_member(&ev, &sigma)?;
            all_ok &= verdict(
                &format!("spectrum pairing fixes the diagonal model, orders 0..={kk}"),
                out.member.max_abs_diff(&CMatrix::diagonal(&ev)),
                1e-12,
            );
        }
        TransformKind::Hilbert => {
            if nmax == 0 || nmax > 8 {
                bail!("the pinned quadrature grid resolves Cauchy-kernel orders 1..=8");
            }
            let k = nmax as i64;
            let grid = LineGrid::new(400.0, 60001)?;
            let orders: Vec<i64> = (-k..k).collect();
            all_ok &= verdict(
                &format!("cauchy-kernel gram matrix, orders -{k}..{k}"),
                hilbert_gram(&grid, &orders).max_abs_diff(&CMatrix::identity(orders.len())),
                1e-6,
            );

            let grid = LineGrid::new(200.0, 15001)?;
            let pv_max = k.min(2);
            let mut worst: f64 = 0.0;
            for n in -pv_max..=pv_max {
                let f = hilbert_vector(&grid, n);
                let hf = hilbert_apply_pv(&grid, &f)?;
                let lambda = if n >= 0 {
                    Complex64::new(0.0, -1.0)
                } else {
                    Complex64::new(0.0, 1.0)
                };
                for (m, &x) in grid.nodes().iter().enumerate() {
                    if x.abs() <= grid.half_length() / 2.0 {
                        worst = worst.max((hf[m] - f[m] * lambda).norm());
                    }
                }
            }
            all_ok &= verdict(
                &format!("principal-value eigenrelation, |n| <= {pv_max}"),
                worst,
                1e-2,
            );

            let ev: Vec<Complex64> = (-k..k)
                .map(|n| {
                    if n >= 0 {
                        Complex64::new(0.0, -1.0)
                    } else {
                        Complex64::new(0.0, 1.0)
                    }
                })
                .collect();
            let count = orders.len();
            let sigma: Vec<usize> = (0..count).map(|p| count - 1 - p).collect();
            let out = sigma_diagonal_member(&ev, &sigma)?;
            all_ok &= verdict(
                &format!("index reversal fixes the diagonal model, orders -{k}..{k}"),
                out.member.max_abs_diff(&CMatrix::diagonal(&ev)),
                1e-12,
            );
        }
    }
    Ok(exit_on(all_ok))
}

fn run_complexify(cmd: ComplexifyCommand) -> Result<ExitCode> {
    let ComplexifyCommand::Run { unitary, seed } = cmd;
    let u = load_unitary(&unitary)?;
    let dim = u.rows();
    let mut all_ok = true;

    // The realification frame must send U to U*, so build it from the
    // eigenbasis witness rather than from a random conjugation.
    let frame = adjoint_witness(&u)?;
    let re = Realification::new(&u, &frame)?;
    println!("realified {dim}x{dim} unitary over its adjoint witness");
    all_ok &= verdict("round trip restores U", re.restore().max_abs_diff(&u), 1e-8 * dim as f64);

    let hat = re.hat();
    let ortho = hat.transpose().matmul(&hat).max_abs_diff(&RMatrix::identity(2 * dim));
    all_ok &= verdict("hat matrix is orthogonal", ortho, 1e-8);
    all_ok &= verdict(
        "hat commutes with the complex structure",
        clinear_pattern_residual(&hat)?,
        1e-12,
    );
    all_ok &= verdict("J-conjugation transposes the hat", jhat_flip_residual(&hat)?, 1e-12);
    let [rs, ks, circ, comm] = re.block_relation_residuals();
    all_ok &= verdict("real blocks symmetric", rs.max(ks), 1e-10);
    all_ok &= verdict("blocks satisfy R^2 + K^2 = I", circ, 1e-10);
    all_ok &= verdict("blocks commute", comm, 1e-10);

    let (wr, wc) = wblock_generate(dim, seed);
    let out = orbit_via_blocks(&u, &frame, &wr, &wc)?;
    all_ok &= verdict(
        "orbit member: real blocks vs complex route",
        out.agreement,
        1e-8 * dim as f64,
    );
    all_ok &= verdict("orbit member unitarity", unitarity_residual(&out.member), 1e-8 * dim as f64);

    // The identity W reproduces the frame conjugation itself, which for the
    // adjoint witness lands exactly on U*.
    let adj = orbit_via_blocks(&u, &frame, &RMatrix::identity(dim), &RMatrix::zeros(dim, dim))?;
    all_ok &= verdict(
        "identity W-blocks give U*",
        adj.member.max_abs_diff(&u.adjoint()),
        1e-8 * dim as f64,
    );

    if dim % 2 == 0 {
        let cc = random_conjugation(dim, seed.wrapping_add(3));
        let [n1, n2, n3, n4] = conjugation_blocks(&cc)?;
        let report = block_conjugation_check(&n1, &n2, &n3, &n4)?;
        all_ok &= verdict("conjugation block anatomy", report.max_residual(), 1e-7);
    } else {
        println!("conjugation block anatomy skipped (needs an even dimension)");
    }

    Ok(exit_on(all_ok))
}
