use rand::Rng;

use super::{Chromosome, GaConfig};
use crate::corpus::{TemplateId, TemplateInventory};
use crate::lm::LanguageModel;
use crate::scalar::LogFloat;

/// Token-LM probability of the first token of `right` following the last
/// two tokens of `left`.
pub fn junction_probability<F: LogFloat>(
    lm: &LanguageModel<F>,
    left: &Chromosome,
    right: &Chromosome,
) -> F {
    let surface = left.surface();
    let context = &surface[surface.len().saturating_sub(2)..];
    F::ten().powf(lm.logprob(context, &right.surface()[0]))
}

/// With probability `mutation_p`, replace the chromosome by a single template
/// drawn uniformly from the inventory.
pub fn mutate<R: Rng + ?Sized>(
    c: Chromosome,
    inventory: &TemplateInventory,
    cfg: &GaConfig,
    rng: &mut R,
) -> Chromosome {
    if rng.gen::<f64>() < cfg.mutation_p {
        let id = TemplateId(rng.gen_range(0..inventory.len()));
        Chromosome::single(id, inventory)
    } else {
        c
    }
}

/// Signature-LM fitness in `(0, 1]`:
///
/// ```text
/// 10^-max( NLp / len, NLt / ((len + 2) * max(1, |L - len|)) )
/// ```
///
/// `NLp` and `NLt` are the negated log10 probabilities of the chunk-tag
/// signature without and with sentence boundaries, `len` counts templates and
/// `L` is the target length.
pub fn fitness<F: LogFloat>(c: &Chromosome, signature_lm: &LanguageModel<F>, cfg: &GaConfig) -> F {
    let sig = c.signature();
    let len = sig.len();
    let nl_partial = -signature_lm.sequence_logprob(sig, false);
    let nl_total = -signature_lm.sequence_logprob(sig, true);
    let gap = cfg.target_length.abs_diff(len).max(1);
    let len_f = F::from_count(len as u64);
    let partial = nl_partial / len_f;
    let total = nl_total / ((len_f + F::lit(2.0)) * F::from_count(gap as u64));
    let score = partial.max(total).max(F::zero());
    F::ten().powf(-score).max(F::min_positive_value())
}
