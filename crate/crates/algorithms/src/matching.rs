use graph_core::Label;
use lcl_core::{MAT, UNM};
use pps::RngStream;
use serde::Serialize;
use transformer::{EdgeDetect, EdgePhase, EdgeView};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct MmRegs {
    pub active: bool,
    pub requested: Option<usize>,
    pub candidate: Option<usize>,
    /// Whether this node already has a Mat register.
    pub my_hint: bool,
    pub partner_hint: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MmMsg {
    Request { hint: bool },
    Accept { hint: bool },
}

/// Request/accept matching phase of length 4.
#[derive(Debug, Clone, Copy, Default)]
pub struct MatchingPhase;

impl EdgePhase for MatchingPhase {
    type Regs = MmRegs;
    type Payload = MmMsg;

    fn phi(&self) -> u16 {
        4
    }

    fn fresh_regs(&self, _degree: usize) -> MmRegs {
        MmRegs::default()
    }

    fn random_regs(&self, degree: usize, _delta: usize, rng: &mut RngStream) -> MmRegs {
        let port = |rng: &mut RngStream| if degree > 0 && rng.coin() { Some(rng.below(degree)) } else { None };
        MmRegs { active: rng.coin(), requested: port(rng), candidate: port(rng), my_hint: rng.coin(), partner_hint: rng.coin() }
    }

    fn reshape_regs(&self, regs: &mut MmRegs, map: &[Option<usize>]) {
        let remap = |p: Option<usize>| p.and_then(|p| map.iter().position(|&q| q == Some(p)));
        regs.requested = remap(regs.requested);
        regs.candidate = remap(regs.candidate);
    }

    fn random_payload(&self, _delta: usize, rng: &mut RngStream) -> MmMsg {
        if rng.coin() {
            MmMsg::Request { hint: rng.coin() }
        } else {
            MmMsg::Accept { hint: rng.coin() }
        }
    }

    fn step(&self, j: u16, view: &EdgeView<'_, MmMsg>, regs: &mut MmRegs, rng: &mut RngStream, send: &mut [Option<MmMsg>]) -> Vec<(usize, Label)> {
        match j {
            1 => {
                regs.my_hint = view.outs.contains(&Some(MAT));
                regs.active = rng.coin();
                regs.requested = None;
                regs.candidate = None;
                let ports: Vec<usize> = (0..view.engaged.len()).filter(|&p| view.engaged[p]).collect();
                if regs.active && !ports.is_empty() {
                    let p = ports[rng.below(ports.len())];
                    regs.requested = Some(p);
                    send[p] = Some(MmMsg::Request { hint: regs.my_hint });
                }
                Vec::new()
            }
            2 => {
                if !regs.active {
                    let first = view.received.iter().enumerate().find_map(|(p, m)| match m {
                        Some(MmMsg::Request { hint }) => Some((p, *hint)),
                        _ => None,
                    });
                    if let Some((p, hint)) = first {
                        regs.candidate = Some(p);
                        regs.partner_hint = hint;
                        send[p] = Some(MmMsg::Accept { hint: regs.my_hint });
                    }
                }
                Vec::new()
            }
            _ => {
                if regs.active {
                    if let Some(p) = regs.requested {
                        if let Some(Some(MmMsg::Accept { hint })) = view.received.get(p) {
                            regs.candidate = Some(p);
                            regs.partner_hint = *hint;
                        }
                    }
                }
                match regs.candidate {
                    Some(p) if p < view.engaged.len() => {
                        vec![(p, if regs.my_hint || regs.partner_hint { UNM } else { MAT })]
                    }
                    _ => Vec::new(),
                }
            }
        }
    }
}

/// Detection with one bit besides the output: whether the sender has
/// another Mat register.
#[derive(Debug, Clone, Copy, Default)]
pub struct MatchingDetect;

fn other_mat(outs: &[Option<Label>], port: usize) -> bool {
    outs.iter().enumerate().any(|(w, o)| w != port && *o == Some(MAT))
}

impl EdgeDetect for MatchingDetect {
    type Extra = bool;

    fn extra(&self, outs: &[Option<Label>], port: usize) -> bool {
        other_mat(outs, port)
    }

    fn verdict(&self, outs: &[Option<Label>], port: usize, flag: &bool) -> bool {
        let mine = other_mat(outs, port);
        match outs[port] {
            None => true,
            Some(o) if o == MAT => !(*flag || mine),
            Some(_) => *flag || mine,
        }
    }

    fn random_extra(&self, rng: &mut RngStream) -> bool {
        rng.coin()
    }
}
