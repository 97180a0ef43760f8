//! Double-entry bookkeeping over integer-valued systems: ledgers of runs,
//! trial balances of composites, and a builder for account-style systems.

use crate::cornering::{eval_flow, z_cell, Cell, Exchange, FlowError, Polarity};
use crate::rgraph::{pair_name, GraphHom, RGraph, RGraphError, Span};
use crate::situated::{s_compose, SituatedBoundary, SituatedError, SituatedSystem};
use crate::theory::ZTheory;
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error)]
pub enum AccountsError {
    #[error("{0}")]
    Flow(#[from] FlowError),
    #[error("{0}")]
    Situated(#[from] SituatedError),
    #[error("{0}")]
    Graph(#[from] RGraphError),
    #[error("invalid path: {0}")]
    Path(String),
    #[error("invalid account: {0}")]
    Invalid(String),
}

/// Which boundary of an account a movement crosses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// One transition of a run, in ledger form: balances before and after, and
/// the signed amounts posted across each boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerRow {
    pub transition: String,
    pub opening: i64,
    pub closing: i64,
    pub left_postings: Vec<i64>,
    pub right_postings: Vec<i64>,
}

impl LedgerRow {
    pub fn net(&self) -> i64 {
        self.left_postings.iter().sum::<i64>() + self.right_postings.iter().sum::<i64>()
    }
}

/// The ledger of a run: rows chain (each closing balance is the next
/// opening balance) and every row conserves value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ledger {
    pub rows: Vec<LedgerRow>,
    pub opening: i64,
    pub closing: i64,
}

impl Ledger {
    pub fn delta(&self) -> i64 {
        self.closing - self.opening
    }

    pub fn net_postings(&self) -> i64 {
        self.rows.iter().map(LedgerRow::net).sum()
    }
}

/// Evaluate each transition of a path to a ledger row. Fails if the path is
/// not a walk of the system, a cell violates conservation, or the rows do
/// not chain.
pub fn ledger_of_run(
    sys: &SituatedSystem<ZTheory>,
    path: &[String],
    start: Option<&str>,
) -> Result<Ledger, AccountsError> {
    let mut rows = Vec::new();
    let mut at: Option<String> = start.map(str::to_string);
    for e in path {
        let Some((src, tgt)) = sys.span.apex.edges.get(e) else {
            return Err(AccountsError::Path(format!("unknown edge `{e}`")));
        };
        if let Some(prev) = &at {
            if prev != src {
                return Err(AccountsError::Path(format!(
                    "path breaks at `{e}`: expected source `{prev}`, found `{src}`"
                )));
            }
        }
        at = Some(tgt.clone());
        let f = eval_flow(&ZTheory, &sys.elabels[e])?;
        rows.push(LedgerRow {
            transition: e.clone(),
            opening: f.top,
            closing: f.bottom,
            left_postings: f.left_postings(),
            right_postings: f.right_postings(),
        });
    }
    let opening = rows.first().map_or_else(
        || {
            start
                .and_then(|v| sys.vlabels.get(v))
                .copied()
                .unwrap_or_default()
        },
        |r| r.opening,
    );
    let closing = rows.last().map_or(opening, |r| r.closing);
    Ok(Ledger {
        rows,
        opening,
        closing,
    })
}

/// One seam of a synchronized run: the amounts the left system posted
/// rightwards and the right system posted leftwards must cancel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationRow {
    pub transition: String,
    pub emitted: i64,
    pub absorbed: i64,
}

impl CancellationRow {
    pub fn net(&self) -> i64 {
        self.emitted + self.absorbed
    }
}

/// Ledgers of both components and of their composite along a synchronized
/// path, with the seam cancellation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialBalance {
    pub left: Ledger,
    pub right: Ledger,
    pub composite: Ledger,
    pub cancellation: Vec<CancellationRow>,
    pub balanced: bool,
}

/// Run both components and their composite along a synchronized path and
/// check the books: every seam cancels, the composite's outer postings are
/// the components' outer postings, and the composite balance change is the
/// sum of the component balance changes.
pub fn trial_balance(
    r: &SituatedSystem<ZTheory>,
    s: &SituatedSystem<ZTheory>,
    pairs: &[(String, String)],
) -> Result<TrialBalance, AccountsError> {
    let composite_sys = s_compose(r, s)?;
    let left_path: Vec<String> = pairs.iter().map(|(a, _)| a.clone()).collect();
    let right_path: Vec<String> = pairs.iter().map(|(_, b)| b.clone()).collect();
    let path: Vec<String> = pairs.iter().map(|(a, b)| pair_name(a, b)).collect();
    let left = ledger_of_run(r, &left_path, None)?;
    let right = ledger_of_run(s, &right_path, None)?;
    let composite = ledger_of_run(&composite_sys, &path, None)?;
    let mut cancellation = Vec::new();
    let mut balanced = true;
    for i in 0..pairs.len() {
        let row = CancellationRow {
            transition: path[i].clone(),
            emitted: left.rows[i].right_postings.iter().sum(),
            absorbed: right.rows[i].left_postings.iter().sum(),
        };
        balanced &= row.net() == 0;
        balanced &= composite.rows[i].left_postings == left.rows[i].left_postings;
        balanced &= composite.rows[i].right_postings == right.rows[i].right_postings;
        cancellation.push(row);
    }
    balanced &= composite.delta() == left.delta() + right.delta();
    Ok(TrialBalance {
        left,
        right,
        composite,
        cancellation,
        balanced,
    })
}

/// A movement an account can perform: `amount` is the signed balance delta
/// and `side` is the boundary the value crosses. The boundary label is the
/// outgoing exchange entry on the crossing value, so a payer's right
/// interface matches a payee's left interface exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub name: String,
    pub side: Side,
    pub amount: i64,
}

impl Move {
    pub fn new(name: impl Into<String>, side: Side, amount: i64) -> Self {
        Move {
            name: name.into(),
            side,
            amount,
        }
    }

    /// The value as it appears on the boundary label: a posting of
    /// `amount` on the right is carried by the entry `(-amount)°`.
    fn label_value(&self) -> i64 {
        match self.side {
            Side::Left => self.amount,
            Side::Right => -self.amount,
        }
    }
}

fn balance_vertex(b: i64) -> String {
    format!("b{b}")
}

fn amount_edge(a: i64) -> String {
    format!("x{a}")
}

/// Build an account system: one state per balance in `lo..=hi`, and for
/// each move a transition `"<name>@<b>"` out of every balance `b` whose
/// result stays in range. Each boundary is a one-vertex graph with one edge
/// per distinct amount moved on that side, labeled by the outgoing exchange
/// entry on the amount.
pub fn mk_account(lo: i64, hi: i64, moves: &[Move]) -> Result<SituatedSystem<ZTheory>, AccountsError> {
    if lo > hi {
        return Err(AccountsError::Invalid(format!("empty balance range {lo}..={hi}")));
    }
    if lo > 0 || hi < 0 {
        return Err(AccountsError::Invalid(format!(
            "balance range {lo}..={hi} must contain 0"
        )));
    }
    if let Some(m) = moves.iter().find(|m| m.amount == 0) {
        return Err(AccountsError::Invalid(format!(
            "move `{}` has zero amount",
            m.name
        )));
    }
    let boundary_graph = |amounts: &[i64]| -> Result<RGraph, RGraphError> {
        RGraph::new(
            ["u"],
            amounts
                .iter()
                .map(|&a| (amount_edge(a), "u".to_string(), "u".to_string()))
                .collect::<Vec<_>>(),
        )
    };
    let side_amounts = |side: Side| -> Vec<i64> {
        let mut v: Vec<i64> = moves
            .iter()
            .filter(|m| m.side == side)
            .map(Move::label_value)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let left_graph = boundary_graph(&side_amounts(Side::Left))?;
    let right_graph = boundary_graph(&side_amounts(Side::Right))?;
    let boundary = |g: &RGraph| SituatedBoundary::<ZTheory> {
        graph: g.clone(),
        labels: g
            .edges
            .keys()
            .map(|e| {
                let x = if let Some(a) = e.strip_prefix('x') {
                    Exchange::single(a.parse().unwrap(), Polarity::Out)
                } else {
                    Exchange::empty()
                };
                (e.clone(), x)
            })
            .collect(),
    };

    let vertices: Vec<String> = (lo..=hi).map(balance_vertex).collect();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    let mut elabels: BTreeMap<String, Cell<ZTheory>> = BTreeMap::new();
    let mut leg0_emap: BTreeMap<String, String> = BTreeMap::new();
    let mut leg1_emap: BTreeMap<String, String> = BTreeMap::new();
    for m in moves {
        for b in lo..=hi {
            let b2 = b + m.amount;
            if b2 < lo || b2 > hi {
                continue;
            }
            let id = format!("{}@{}", m.name, b);
            if elabels.contains_key(&id) {
                return Err(AccountsError::Invalid(format!("duplicate transition `{id}`")));
            }
            edges.push((id.clone(), balance_vertex(b), balance_vertex(b2)));
            let x = m.label_value();
            let (cell, l0, l1) = match m.side {
                Side::Left => (
                    z_cell(b, &[(x, Polarity::Out)], &[]),
                    amount_edge(x),
                    "eps:u".to_string(),
                ),
                Side::Right => (
                    z_cell(b, &[], &[(x, Polarity::Out)]),
                    "eps:u".to_string(),
                    amount_edge(x),
                ),
            };
            elabels.insert(id.clone(), cell);
            leg0_emap.insert(id.clone(), l0);
            leg1_emap.insert(id, l1);
        }
    }
    let apex = RGraph::new(vertices.clone(), edges)?;
    let vmap: BTreeMap<String, String> = vertices.iter().map(|v| (v.clone(), "u".to_string())).collect();
    for (v, tr) in &apex.trivial {
        leg0_emap.insert(tr.clone(), "eps:u".to_string());
        leg1_emap.insert(tr.clone(), "eps:u".to_string());
        elabels.insert(tr.clone(), Cell::VId(v.trim_start_matches('b').parse().unwrap()));
    }
    let vlabels: BTreeMap<String, i64> = vertices
        .iter()
        .map(|v| (v.clone(), v.trim_start_matches('b').parse().unwrap()))
        .collect();
    let span = Span {
        left_boundary: left_graph.clone(),
        apex,
        right_boundary: right_graph.clone(),
        leg0: GraphHom {
            vmap: vmap.clone(),
            emap: leg0_emap,
        },
        leg1: GraphHom {
            vmap,
            emap: leg1_emap,
        },
    };
    Ok(SituatedSystem {
        theory: ZTheory,
        span,
        vlabels,
        elabels,
        src_boundary: boundary(&left_graph),
        tgt_boundary: boundary(&right_graph),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::situated::validate_situated;

    fn payer() -> SituatedSystem<ZTheory> {
        // Holds 0..=6; receives 2 from the left, pays 2 to the right.
        mk_account(
            0,
            6,
            &[
                Move::new("earn", Side::Left, 2),
                Move::new("pay", Side::Right, -2),
            ],
        )
        .unwrap()
    }

    fn payee() -> SituatedSystem<ZTheory> {
        mk_account(
            0,
            6,
            &[
                Move::new("collect", Side::Left, 2),
                Move::new("spend", Side::Right, -2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn accounts_are_coherent() {
        let limits = Limits::default();
        assert_eq!(validate_situated(&payer(), &limits), Vec::new());
        assert_eq!(validate_situated(&payee(), &limits), Vec::new());
    }

    #[test]
    fn ledger_chains_and_conserves() {
        let sys = payer();
        let led = ledger_of_run(
            &sys,
            &["earn@0".into(), "earn@2".into(), "pay@4".into()],
            Some("b0"),
        )
        .unwrap();
        assert_eq!(led.opening, 0);
        assert_eq!(led.closing, 2);
        assert_eq!(led.delta(), led.net_postings());
        for w in led.rows.windows(2) {
            assert_eq!(w[0].closing, w[1].opening);
        }
        // Broken walk is rejected.
        assert!(ledger_of_run(&sys, &["earn@0".into(), "pay@4".into()], None).is_err());
    }

    #[test]
    fn transfer_balances() {
        let pairs = vec![
            ("earn@0".to_string(), "eps:b0".to_string()),
            ("pay@2".to_string(), "collect@0".to_string()),
            ("eps:b0".to_string(), "spend@2".to_string()),
        ];
        let tb = trial_balance(&payer(), &payee(), &pairs).unwrap();
        assert!(tb.balanced);
        assert_eq!(tb.left.delta() + tb.right.delta(), tb.composite.delta());
        // The middle step is the seam transfer: 2 emitted, 2 absorbed.
        assert_eq!(tb.cancellation[1].emitted, -2);
        assert_eq!(tb.cancellation[1].absorbed, 2);
        assert!(tb.cancellation.iter().all(|c| c.net() == 0));
    }
}
