//! Seeded instance generators. Every family is deterministic in its seed:
//! the same arguments always produce byte-identical files.

use clap::{Args, Subcommand};
use fewrows::error::Result;
use fewrows::reductions::{digit_split, ksum_to_ilp, uks_to_ilp1, KnapsackInstance, KnapsackMode, KSumInstance};
use fewrows::{format_instance, IlpInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(subcommand)]
    pub family: Family,
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// Unbounded knapsack as one equality row (weights, capacity, profits).
    Uks1 {
        /// Item count.
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Weights drawn uniformly from [1, delta].
        #[arg(long, default_value_t = 20)]
        delta: i128,
        /// Knapsack capacity (the right-hand side).
        #[arg(long = "capacity", visible_alias = "C", default_value_t = 1000)]
        capacity: i128,
        /// Profits drawn uniformly from [0, profit-max].
        #[arg(long, default_value_t = 100)]
        profit_max: i128,
        /// Allow total weight below capacity (adds a slack item).
        #[arg(long)]
        at_most: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Unbounded knapsack digit-split into m rows with entries about
    /// capacity^(1/m).
    Uksm {
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Row count after the split.
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long = "capacity", visible_alias = "C", default_value_t = 1000)]
        capacity: i128,
        #[arg(long, default_value_t = 100)]
        profit_max: i128,
        #[arg(long)]
        at_most: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// k-SUM (pick one element per set to hit a target) packed into one row;
    /// optionally digit-split into m rows.
    Ksum {
        /// Number of sets (at least 2).
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Elements per set, drawn uniformly from [0, target].
        #[arg(long, default_value_t = 5)]
        set_size: usize,
        #[arg(long, default_value_t = 50)]
        target: i128,
        /// 1 keeps the packed single row; larger values digit-split it.
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Uniform random instance.
    Random {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Matrix entries drawn uniformly from [-delta, delta].
        #[arg(long, default_value_t = 5)]
        delta: i128,
        /// Right-hand side entries drawn from [-b-max, b-max].
        #[arg(long, default_value_t = 30)]
        b_max: i128,
        /// Objective entries drawn from [0, c-max].
        #[arg(long, default_value_t = 10)]
        c_max: i128,
        /// Force row 0 entries into [1, delta] and b[0] nonnegative, which
        /// certifies a finite l1 bound (no unbounded runs).
        #[arg(long)]
        positive_row: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Builds the instance for a family and renders it in the shared text format.
pub fn generate(family: &Family) -> Result<String> {
    Ok(format_instance(&instance_for(family)?))
}

fn instance_for(family: &Family) -> Result<IlpInstance> {
    match family {
        Family::Uks1 {
            n,
            delta,
            capacity,
            profit_max,
            at_most,
            seed,
        } => uks_to_ilp1(&random_knapsack(
            *n, *delta, *capacity, *profit_max, *at_most, *seed,
        )?),
        Family::Uksm {
            n,
            m,
            capacity,
            profit_max,
            at_most,
            seed,
        } => {
            // Weights must stay below the capacity's m-th-root base, so the
            // split never needs more digits than rows; drawing them from
            // [1, capacity] keeps the family meaningful at every m.
            let one_row = uks_to_ilp1(&random_knapsack(
                *n, *capacity, *capacity, *profit_max, *at_most, *seed,
            )?)?;
            digit_split(&one_row, *m)
        }
        Family::Ksum {
            k,
            set_size,
            target,
            m,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let hi = (*target).max(0);
            let sets: Vec<Vec<i128>> = (0..*k)
                .map(|_| (0..*set_size).map(|_| rng.gen_range(0..=hi)).collect())
                .collect();
            let packed = ksum_to_ilp(&KSumInstance::new(*target, sets)?)?;
            if *m > 1 {
                digit_split(&packed, *m)
            } else {
                Ok(packed)
            }
        }
        Family::Random {
            m,
            n,
            delta,
            b_max,
            c_max,
            positive_row,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let rows: Vec<Vec<i128>> = (0..*m)
                .map(|k| {
                    (0..*n)
                        .map(|_| {
                            if k == 0 && *positive_row {
                                rng.gen_range(1..=(*delta).max(1))
                            } else {
                                rng.gen_range(-*delta..=*delta)
                            }
                        })
                        .collect()
                })
                .collect();
            let b: Vec<i128> = (0..*m)
                .map(|k| {
                    if k == 0 && *positive_row {
                        rng.gen_range(0..=*b_max)
                    } else {
                        rng.gen_range(-*b_max..=*b_max)
                    }
                })
                .collect();
            let c: Vec<i128> = (0..*n).map(|_| rng.gen_range(0..=*c_max)).collect();
            IlpInstance::new(rows, b, c)
        }
    }
}

fn random_knapsack(
    n: usize,
    w_max: i128,
    capacity: i128,
    profit_max: i128,
    at_most: bool,
    seed: u64,
) -> Result<KnapsackInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<i128> = (0..n).map(|_| rng.gen_range(1..=w_max.max(1))).collect();
    let profits: Vec<i128> = (0..n)
        .map(|_| rng.gen_range(0..=profit_max.max(0)))
        .collect();
    let mode = if at_most {
        KnapsackMode::AtMost
    } else {
        KnapsackMode::Equality
    };
    KnapsackInstance::new(capacity, weights, profits, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fewrows::{max_abs_entry, parse_instance};

    #[test]
    fn same_seed_same_bytes() {
        let fam = Family::Random {
            m: 3,
            n: 5,
            delta: 7,
            b_max: 40,
            c_max: 9,
            positive_row: false,
            seed: 7,
        };
        assert_eq!(generate(&fam).unwrap(), generate(&fam).unwrap());
        let other = Family::Random {
            m: 3,
            n: 5,
            delta: 7,
            b_max: 40,
            c_max: 9,
            positive_row: false,
            seed: 8,
        };
        assert_ne!(generate(&fam).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn uksm_splits_capacity_13_into_base_4_digits() {
        let fam = Family::Uksm {
            n: 3,
            m: 2,
            capacity: 13,
            profit_max: 5,
            at_most: false,
            seed: 2,
        };
        let inst = parse_instance(&generate(&fam).unwrap()).unwrap();
        // integer_root(13, 2) = 3, so the digit base is 4: two rows whose
        // entries (digits and carry coefficients) all lie in [-4, 4].
        assert_eq!(inst.m(), 2);
        assert!(max_abs_entry(&inst) <= 4);
    }

    #[test]
    fn ksum_family_is_a_single_packed_row() {
        let fam = Family::Ksum {
            k: 2,
            set_size: 3,
            target: 9,
            m: 1,
            seed: 3,
        };
        let inst = parse_instance(&generate(&fam).unwrap()).unwrap();
        assert_eq!(inst.m(), 1);
        assert!(inst.feasibility_only());
        assert_eq!(inst.n(), 6);
    }

    #[test]
    fn positive_row_family_has_positive_first_row() {
        let fam = Family::Random {
            m: 2,
            n: 6,
            delta: 5,
            b_max: 30,
            c_max: 10,
            positive_row: true,
            seed: 11,
        };
        let inst = parse_instance(&generate(&fam).unwrap()).unwrap();
        assert!((0..inst.n()).all(|j| inst.entry(0, j) >= 1));
        assert!(inst.b()[0] >= 0);
    }
}
