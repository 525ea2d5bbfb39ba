use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "cantor", version, about = "Experiments on integer Cantor sets C(b, D)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options every subcommand accepts.
#[derive(Args, Debug)]
pub struct Common {
    /// Config file of key=value lines; flags override its entries
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Cantor set, e.g. "b=3;D=0,2"
    #[arg(long, value_name = "SPEC")]
    pub cantor: Option<String>,
    /// Seed for stochastic experiments
    #[arg(long)]
    pub seed: Option<String>,
    /// CSV output path; a JSON mirror is written next to it
    /// [default: $CANTOR_OUT_DIR/<subcommand>.csv, else standard output]
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,
    /// Print JSON instead of CSV when writing to standard output
    #[arg(long)]
    pub json: bool,
    /// Extra parameter, repeatable
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

/// Flags of a subcommand as config entries.
pub trait Flags {
    fn common(&self) -> &Common;
    fn pairs(&self) -> Vec<(&'static str, Option<&str>)>;
}

macro_rules! flags {
    ($name:ident { $($(#[doc = $doc:literal])* $field:ident => $key:literal),* $(,)? }) => {
        #[derive(Args, Debug)]
        pub struct $name {
            #[command(flatten)]
            pub common: Common,
            $(
                $(#[doc = $doc])*
                #[arg(long = $key)]
                pub $field: Option<String>,
            )*
        }

        impl Flags for $name {
            fn common(&self) -> &Common {
                &self.common
            }

            fn pairs(&self) -> Vec<(&'static str, Option<&str>)> {
                vec![$(($key, self.$field.as_deref())),*]
            }
        }
    };
}

flags!(EnumerateArgs {
    /// Number of members to list [default: 10]
    count => "count",
    /// First index [default: 0]
    start => "start",
});

flags!(WeylArgs {
    /// Frequency of k_n: "p/q" is exact, decimals and named constants are real
    alpha => "alpha",
    /// Frequency of the digit sum [default: 0]
    beta => "beta",
    /// Number of terms [default: 4096]
    n => "N",
    /// First index of the window [default: 0]
    start => "start",
    /// Polynomial phase in x = k_n and y = s_b(k_n), replacing alpha and beta
    poly => "poly",
});

flags!(RieszArgs {
    /// Frequency of k_n
    alpha => "alpha",
    /// Frequency of the digit sum [default: 0]
    beta => "beta",
    /// Number of levels; row j compares the product with the average over |D|^j members [default: 8]
    k => "k",
});

flags!(ClassifyArgs {
    /// Frequency of k_n
    alpha => "alpha",
    /// Frequency of the digit sum [default: 0]
    beta => "beta",
    /// Terms in the reported empirical average [default: 2^16]
    n => "N",
});

flags!(ModdistArgs {
    /// Modulus
    q => "q",
    /// Sample size [default: 2^16]
    n => "N",
    /// "element" for k_n mod q, "digit-sum" for s_b(k_n) mod q [default: element]
    quantity => "quantity",
    /// Largest total-variation distance counted as a pass [default: 0.02]
    tolerance => "tolerance",
});

flags!(JointdistArgs {
    /// Modulus for k_n
    a => "a",
    /// Modulus for s_b(k_n)
    a2 => "a2",
    /// Sample size [default: 2^16]
    n => "N",
});

flags!(ResidueSetArgs {
    /// Residue of k_n
    r => "r",
    /// Residue of s_b(k_n) [default: 0]
    r2 => "r2",
    /// Modulus
    q => "q",
    /// Indices scanned for seeds [default: 1024]
    truncation => "truncation",
});

flags!(IntersectiveArgs {
    /// Exponents n, solving at N = b^n [default: 1,2]
    exponents => "exponents",
    /// "exact" fails above the solver cap, "auto" falls back to a lower bound [default: auto]
    mode => "mode",
    /// Explicit forbidden differences, instead of the Cantor set
    forbidden => "H",
    /// Interval length for explicit differences
    n => "N",
});

flags!(VdcPolyArgs {
    /// Kernel residues; defaults to the largest kernel S with S - S inside D
    s => "S",
    /// Top layer; the product runs over j = 0..=J [default: 2]
    j => "J",
    /// "kernel" for the product of |S|^-2 |sum of e(s b^j x)|^2, "product" for one cosine factor per residue [default: kernel]
    construction => "construction",
    /// Grid points for the nonnegativity check [default: 10000]
    grid => "grid",
});

flags!(KernelArgs {});

flags!(EnergyArgs {
    /// Explicit integer set, instead of a Cantor truncation
    elements => "elements",
    /// Truncation C ∩ [0, b^levels) [default: 2]
    levels => "levels",
});

flags!(PaircorrArgs {
    /// Fixed frequency; without it the frequencies are drawn from the seed
    alpha => "alpha",
    /// Number of seeded draws [default: 20]
    draws => "draws",
    /// Number of points [default: 4096]
    n => "N",
    /// Comma-separated scales s [default: 0.25,0.5,0.75]
    s => "s",
    /// Largest |R2 - 2s| counted as a pass [default: 0.2]
    tolerance => "tolerance",
});

flags!(ErgodicArgs {
    /// Spectral vector file, one "alpha, beta, re, im" line per component
    vector => "vector",
    /// Inline components, lines separated by ';'
    components => "components",
    /// Number of terms [default: 2^14]
    n => "N",
    /// Polynomial map "p1, p2" applied to (k_n, s_b(k_n)) [default: x, y]
    map => "map",
    /// Largest distance to the predicted limit counted as a pass [default: 0.05]
    tolerance => "tolerance",
});

flags!(RecurrenceArgs {
    /// Period of the set A
    q => "q",
    /// Residues forming A [default: 0]
    residues => "A",
    /// Polynomial in k [default: x^2]
    p => "p",
    /// Coefficients c0,c1,... of the polynomial, instead of p
    coefficients => "coefficients",
    /// Members k of C with 1 <= k <= N are averaged
    n => "N",
});

flags!(VerifyAllArgs {
    /// Comma-separated criterion numbers [default: all]
    only => "only",
});

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List members k_n with their digit sums
    Enumerate(EnumerateArgs),
    /// Average of e(alpha k_n + beta s_b(k_n)) over a window of indices
    Weyl(WeylArgs),
    /// Riesz products against the averages they equal
    Riesz(RieszArgs),
    /// Which limits of the Weyl averages are possible, with witnesses
    Classify(ClassifyArgs),
    /// Empirical and predicted laws of k_n or s_b(k_n) modulo q
    Moddist(ModdistArgs),
    /// Joint law of (k_n mod a, s_b(k_n) mod a2)
    Jointdist(JointdistArgs),
    /// Indices n with k_n ≡ r and s_b(k_n) ≡ r2 (mod q) as progressions
    ResidueSet(ResidueSetArgs),
    /// Largest sets avoiding differences in C ∖ {0}
    Intersective(IntersectiveArgs),
    /// Exact cosine expansion of the van der Corput product over a kernel
    VdcPoly(VdcPolyArgs),
    /// Largest S ⊆ Z_b with S - S ⊆ D
    Kernel(KernelArgs),
    /// Additive energy of a set or a Cantor truncation
    Energy(EnergyArgs),
    /// Pair correlation of alpha k_n mod 1
    Paircorr(PaircorrArgs),
    /// Ergodic averages of a spectral vector against their predicted limit
    Ergodic(ErgodicArgs),
    /// Density of k in C with k and k + p(k) in a periodic set
    Recurrence(RecurrenceArgs),
    /// Run the acceptance suite
    VerifyAll(VerifyAllArgs),
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    #[test]
    fn arguments_are_consistent() {
        super::Cli::command().debug_assert();
    }
}
