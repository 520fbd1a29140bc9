//! Shape-valid random models, not necessarily semantically valid.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::Rng;
use crate::model::*;

const NAME_CHARS: &[char] =
    &['a', 'b', 'k', 'x', 'Z', 'Q', '0', '7', ' ', '-', '_', '.', '"', '\\', '\n', '\t', 'é', 'ß', '→', '{', '#'];

fn display_name(rng: &mut Rng) -> String {
    let n = rng.gen_range(0..10);
    (0..n).map(|_| *NAME_CHARS.choose(rng).unwrap()).collect()
}

fn bare_name(rng: &mut Rng) -> String {
    const FIRST: &[u8] = b"abcxyzABQZ";
    const REST: &[u8] = b"abz09_-XY";
    let mut s = String::from(*FIRST.choose(rng).unwrap() as char);
    for _ in 0..rng.gen_range(0..8) {
        s.push(*REST.choose(rng).unwrap() as char);
    }
    s
}

fn ptype(rng: &mut Rng) -> ParamType {
    if rng.gen_bool(0.15) {
        // anything that is not a supported keyword stays unsupported
        ParamType::from_keyword(&bare_name(rng))
    } else {
        ParamType::SUPPORTED.choose(rng).unwrap().clone()
    }
}

fn params(rng: &mut Rng) -> Vec<Param> {
    (0..rng.gen_range(0..4)).map(|_| Param::new(bare_name(rng), ptype(rng))).collect()
}

fn literal(rng: &mut Rng) -> Literal {
    match rng.gen_range(0..4) {
        0 => Literal::Text(display_name(rng)),
        1 => Literal::Integer(rng.gen()),
        2 => Literal::Decimal(format!("{}.{}", rng.gen::<i32>(), rng.gen_range(0..100_000u32))),
        _ => Literal::Boolean(rng.gen()),
    }
}

fn path(rng: &mut Rng) -> Operand {
    Operand::Path(FieldPath::new(display_name(rng), bare_name(rng)))
}

fn comparison(rng: &mut Rng) -> Comparison {
    let op = *CompareOp::ALL.choose(rng).unwrap();
    let p = path(rng);
    let other = if rng.gen() { path(rng) } else { Operand::Literal(literal(rng)) };
    if rng.gen() {
        Comparison { lhs: p, op, rhs: other }
    } else {
        Comparison { lhs: other, op, rhs: p }
    }
}

/// A model whose every list is populated at random, names included.
pub fn random_model(rng: &mut Rng) -> IntentionModel {
    let platform = if rng.gen_bool(0.9) { Some(*Platform::ALL.choose(rng).unwrap()) } else { None };
    IntentionModel {
        contract: ContractHeader { name: display_name(rng), platform },
        participants: (0..rng.gen_range(0..4))
            .map(|_| Participant { name: display_name(rng), creator: rng.gen(), params: params(rng) })
            .collect(),
        assets: (0..rng.gen_range(0..4)).map(|_| Asset { name: display_name(rng), fields: params(rng) }).collect(),
        transactions: (0..rng.gen_range(0..4))
            .map(|_| Transaction { name: display_name(rng), params: params(rng) })
            .collect(),
        relationships: (0..rng.gen_range(0..5))
            .map(|_| Relationship {
                kind: if rng.gen() { RelKind::TranRel } else { RelKind::AssetRel },
                transaction: display_name(rng),
                target: display_name(rng),
            })
            .collect(),
        conditions: (0..rng.gen_range(0..4))
            .map(|_| Condition { transaction: display_name(rng), guard: comparison(rng) })
            .collect(),
    }
}
