//! Example codes: Hadamard, computational-basis, the 2→1 and 3→1 random
//! access codes, and seeded random smooth quantum instances.

use super::bits::Word;
use super::decoder::{ClassicalDecoder, OutputTable, QuantumDecoder, QueryPlan, QuerySet};
use super::types::{ClassicalCode, CodeFamily, CodeKind, CodeParams, QuantumCode};
use crate::error::{Error, Result};
use crate::quantum::{pauli_eigenprojectors, DensityOperator, PauliLetter, PauliString};
use crate::rng::stream;
use crate::tol::Tolerances;
use num_complex::Complex64;
use rand::Rng;
use std::collections::BTreeMap;

/// Hadamard code on n bits: m = 2^n positions indexed by subsets of [n],
/// position s holding the parity ∏_{j∈s} x_j. The decoder for i samples a
/// uniform subset S and multiplies the bits at positions S and S△{i}.
pub fn hadamard_code(n: usize, tol: &Tolerances) -> Result<(ClassicalCode, ClassicalDecoder)> {
    if n == 0 || n > 6 {
        return Err(Error::QubitCapExceeded {
            requested: n,
            cap: 6,
        });
    }
    let m = 1usize << n;
    let table: Vec<Word> = Word::all(n)
        .map(|x| {
            let signs: Vec<i8> = (0..m)
                .map(|s| x.sign_product_over((0..n).filter(|j| (s >> j) & 1 == 1)))
                .collect();
            Word::from_signs(&signs)
        })
        .collect();
    let code = ClassicalCode::new(n, m, table)?;

    let mut entries = Vec::with_capacity(n);
    let mut outputs = BTreeMap::new();
    for i in 0..n {
        let flip = 1usize << i;
        let mut row = Vec::new();
        for s in 0..m {
            let t = s ^ flip;
            if s > t {
                continue; // unordered pair {s, t} counted once
            }
            let set = QuerySet::from_positions(&[s, t]);
            row.push((2.0 / m as f64, set));
            outputs.insert((i, set), OutputTable::signed_parity(2, &[0, 1], 1));
        }
        entries.push(row);
    }
    let plan = QueryPlan::new(n, m, 2, entries, tol)?;
    let decoder = ClassicalDecoder::new(plan, outputs)?;
    Ok((code, decoder))
}

/// Computational-basis quantum code Q(x) = |x⟩⟨x| with Z-measurement decoders.
pub fn basis_code(n: usize, tol: &Tolerances) -> Result<(QuantumCode, QuantumDecoder)> {
    tol.check_qubits(n)?;
    let states = Word::all(n)
        .map(|x| DensityOperator::basis(n, x.index()))
        .collect::<Result<Vec<_>>>()?;
    let code = QuantumCode::new(n, n, states)?;

    let mut entries = Vec::with_capacity(n);
    let mut measurements = BTreeMap::new();
    let z = pauli_eigenprojectors(&PauliString::parse("Z")?);
    for i in 0..n {
        let set = QuerySet::from_positions(&[i]);
        entries.push(vec![(1.0, set)]);
        measurements.insert((i, set), z.clone());
    }
    let plan = QueryPlan::new(n, n, 1, entries, tol)?;
    let decoder = QuantumDecoder::new(plan, measurements)?;
    Ok((code, decoder))
}

pub struct QracInstance {
    pub code: QuantumCode,
    pub decoder: QuantumDecoder,
    /// Per-bit success probability of the intended decoder.
    pub success: f64,
}

/// The 2→1 random access code: Bloch vectors (±1/√2, 0, ±1/√2), bit 1 read
/// with X, bit 2 with Z. Per-bit success 1/2 + 1/(2√2).
pub fn qrac_2to1(tol: &Tolerances) -> Result<QracInstance> {
    let s = 1.0 / 2f64.sqrt();
    let states = Word::all(2)
        .map(|x| {
            DensityOperator::from_bloch([f64::from(x.sign(0)) * s, 0.0, f64::from(x.sign(1)) * s])
        })
        .collect::<Result<Vec<_>>>()?;
    let code = QuantumCode::new(2, 1, states)?;
    let decoder = single_qubit_decoder(&[PauliLetter::X, PauliLetter::Z], tol)?;
    Ok(QracInstance {
        code,
        decoder,
        success: 0.5 + 0.5 * s,
    })
}

/// The 3→1 random access code: Bloch vectors (±1, ±1, ±1)/√3, bits read with
/// X, Y, Z. Per-bit success 1/2 + 1/(2√3).
pub fn qrac_3to1(tol: &Tolerances) -> Result<QracInstance> {
    let s = 1.0 / 3f64.sqrt();
    let states = Word::all(3)
        .map(|x| {
            DensityOperator::from_bloch([
                f64::from(x.sign(0)) * s,
                f64::from(x.sign(1)) * s,
                f64::from(x.sign(2)) * s,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let code = QuantumCode::new(3, 1, states)?;
    let decoder = single_qubit_decoder(&[PauliLetter::X, PauliLetter::Y, PauliLetter::Z], tol)?;
    Ok(QracInstance {
        code,
        decoder,
        success: 0.5 + 0.5 * s,
    })
}

fn single_qubit_decoder(letters: &[PauliLetter], tol: &Tolerances) -> Result<QuantumDecoder> {
    let n = letters.len();
    let set = QuerySet::from_positions(&[0]);
    let mut measurements = BTreeMap::new();
    let entries = (0..n).map(|_| vec![(1.0, set)]).collect();
    for (i, &letter) in letters.iter().enumerate() {
        measurements.insert(
            (i, set),
            pauli_eigenprojectors(&PauliString::new(vec![letter])?),
        );
    }
    let plan = QueryPlan::new(n, 1, 1, entries, tol)?;
    QuantumDecoder::new(plan, measurements)
}

/// Binary entropy, H(0) = H(1) = 0.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Minimum length (1 − H(1/2+ε))·n that any (n,m,ε) random access code must
/// satisfy.
pub fn qrac_length_bound(n: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Invalid(format!("ε = {eps} must lie in (0, 1/2]")));
    }
    Ok((1.0 - binary_entropy(0.5 + eps)) * n as f64)
}

/// A seeded random smooth quantum code with its decoder and honestly
/// measured parameters.
pub struct RandomSmoothInstance {
    pub code: QuantumCode,
    pub decoder: QuantumDecoder,
    pub params: CodeParams,
    pub seed: u64,
}

/// Deterministically generate a smooth quantum code: each message bit is
/// carried by one or more qubit blocks (single qubits holding up to three
/// bits in Bloch components, or qubit pairs holding one bit in their ZZ
/// parity when q ≥ 2), globally mixed with noise. The decoder queries a
/// uniformly random carrier of the requested bit. The returned parameters
/// are measured from the instance, so `verify_params` accepts them by
/// construction.
pub fn random_smooth_instance(
    seed: u64,
    n: usize,
    m: usize,
    q: usize,
    tol: &Tolerances,
) -> Result<RandomSmoothInstance> {
    if n == 0 || m == 0 || q == 0 {
        return Err(Error::Invalid("n, m, q must be positive".into()));
    }
    tol.check_qubits(m)?;
    let mut rng = stream(seed, "random-smooth-instance");

    // Partition positions, in order, into blocks: adjacent pairs (ZZ parity
    // carriers) when allowed, single qubits otherwise.
    #[derive(Clone)]
    enum Block {
        Single {
            qubit: usize,
            letters: Vec<(PauliLetter, usize)>,
        }, // (component, bit)
        Pair {
            qubits: (usize, usize),
            bit: usize,
        },
    }
    let mut blocks: Vec<Block> = Vec::new();
    let mut cursor = 0usize;
    while cursor < m {
        if q >= 2 && m - cursor >= 2 && rng.gen_bool(0.4) {
            blocks.push(Block::Pair {
                qubits: (cursor, cursor + 1),
                bit: usize::MAX,
            });
            cursor += 2;
        } else {
            blocks.push(Block::Single {
                qubit: cursor,
                letters: Vec::new(),
            });
            cursor += 1;
        }
    }

    // Capacity per block: singles carry 1..=min(3, n) Bloch components,
    // pairs carry exactly one bit. Fill slots cyclically over bits so every
    // bit gets at least one carrier when capacity allows.
    let mut slots: Vec<(usize, usize)> = Vec::new(); // (block index, slot within block)
    for (b, block) in blocks.iter().enumerate() {
        match block {
            Block::Single { .. } => {
                let cap = rng.gen_range(1..=3usize);
                for s in 0..cap {
                    slots.push((b, s));
                }
            }
            Block::Pair { .. } => slots.push((b, 0)),
        }
    }
    if slots.len() < n {
        return Err(Error::Invalid(format!(
            "seed {seed}: only {} carrier slots for {n} bits; increase m",
            slots.len()
        )));
    }
    let letter_cycle = [PauliLetter::X, PauliLetter::Z, PauliLetter::Y];
    let mut carriers: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // bit → [(block, slot)]
    for (t, &(b, s)) in slots.iter().enumerate() {
        let bit = t % n;
        carriers[bit].push((b, s));
        match &mut blocks[b] {
            Block::Single { letters, .. } => letters.push((letter_cycle[s], bit)),
            Block::Pair { bit: pair_bit, .. } => *pair_bit = bit,
        }
    }

    let noise: f64 = rng.gen_range(0.0..0.25);

    // Assemble Q(x) block by block (blocks are in ascending position order),
    // then mix globally.
    let mut states = Vec::with_capacity(1 << n);
    for x in Word::all(n) {
        let mut rho: Option<DensityOperator> = None;
        for block in &blocks {
            let factor = match block {
                Block::Single { letters, .. } => {
                    let norm = 1.0 / (letters.len() as f64).sqrt();
                    let mut v = [0.0f64; 3];
                    for &(letter, bit) in letters {
                        let axis = match letter {
                            PauliLetter::X => 0,
                            PauliLetter::Y => 1,
                            _ => 2,
                        };
                        v[axis] += f64::from(x.sign(bit)) * norm;
                    }
                    DensityOperator::from_bloch(v)?
                }
                Block::Pair { bit, .. } => {
                    // Uniform mixture of the two basis states of parity x_bit.
                    let parity_minus = x.sign(*bit) < 0;
                    let mut mat = crate::quantum::ComplexMatrix::zeros(4);
                    let (s1, s2) = if parity_minus {
                        (0b01, 0b10)
                    } else {
                        (0b00, 0b11)
                    };
                    mat.set(s1, s1, Complex64::new(0.5, 0.0));
                    mat.set(s2, s2, Complex64::new(0.5, 0.0));
                    DensityOperator::new(2, mat, tol)?
                }
            };
            rho = Some(match rho {
                None => factor,
                Some(acc) => acc.kron(&factor),
            });
        }
        let product = rho.expect("m >= 1");
        debug_assert_eq!(product.num_qubits(), m);
        let mixed = product
            .matrix()
            .scale_re(1.0 - noise)
            .add(&DensityOperator::maximally_mixed(m).matrix().scale_re(noise))?;
        states.push(DensityOperator::new(m, mixed, tol)?);
    }
    let code = QuantumCode::new(n, m, states)?;

    // Decoder: uniform over each bit's carriers.
    let mut entries = Vec::with_capacity(n);
    let mut measurements = BTreeMap::new();
    for i in 0..n {
        let mut row = Vec::new();
        let p = 1.0 / carriers[i].len() as f64;
        for &(b, s) in &carriers[i] {
            match &blocks[b] {
                Block::Single { qubit, letters } => {
                    let (letter, _) = letters[s];
                    let set = QuerySet::from_positions(&[*qubit]);
                    row.push((p, set));
                    measurements.entry((i, set)).or_insert_with(|| {
                        pauli_eigenprojectors(&PauliString::new(vec![letter]).unwrap())
                    });
                }
                Block::Pair {
                    qubits: (a, b2), ..
                } => {
                    let set = QuerySet::from_positions(&[*a, *b2]);
                    row.push((p, set));
                    measurements.entry((i, set)).or_insert_with(|| {
                        pauli_eigenprojectors(&PauliString::parse("ZZ").unwrap())
                    });
                }
            }
        }
        entries.push(row);
    }
    let plan = QueryPlan::new(n, m, q, entries, tol)?;
    let decoder = QuantumDecoder::new(plan, measurements)?;

    // Measure the honest parameters: worst-case per-(x, i) success and the
    // largest query marginal.
    let mut eps = f64::INFINITY;
    for i in 0..n {
        for x in Word::all(n) {
            let mu = super::dist::InputDistribution::point_mass(x);
            let s = super::eval::success_quantum(&code, &decoder, i, &mu, None, tol)?;
            eps = eps.min(s - 0.5);
        }
    }
    let mut c = 0.0f64;
    for i in 0..n {
        for p in decoder.plan().marginal(i) {
            c = c.max(p * m as f64);
        }
    }
    if eps <= 0.01 {
        return Err(Error::Invalid(format!(
            "seed {seed}: generated instance has no decoding advantage (ε = {eps:.4})"
        )));
    }
    let q_actual = decoder.plan().max_set_size().max(1);
    let params = CodeParams::new(
        CodeKind::plain(CodeFamily::SmoothQuantum),
        q_actual,
        c,
        eps.min(0.5),
    )?;
    Ok(RandomSmoothInstance {
        code,
        decoder,
        params,
        seed,
    })
}
