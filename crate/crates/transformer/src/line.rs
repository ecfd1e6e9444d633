use graph_core::{clone_graph, line_graph, Configuration, Graph, Kind, Label, Multiset};
use lcl_core::{LclSpec, PotentialSpec};
use pps::{PpsState, RngStream, Step, Tag};
use serde::Serialize;

use engine::{Cause, CorruptMask, Params, Protocol, RoundCtx};

use crate::phase::{random_label, NodePhase, PhaseField, WorkView};
use crate::TransformError;

/// Part an endpoint plays in the current phase of a simulated node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    /// The phase did not start (or is over).
    Idle,
    /// Simulates the node.
    X,
    /// Relays for the other endpoint.
    Y,
}

/// A simulated node's message as published by its `x` endpoint, with the
/// host step it was computed at and its age in rounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VirtualMsg<P> {
    pub hstep: u16,
    pub age: u8,
    pub phase: PhaseField<P>,
}

impl<P: Clone> VirtualMsg<P> {
    fn aged(&self) -> Self {
        VirtualMsg { age: self.age.saturating_add(1), ..self.clone() }
    }
}

/// One endpoint's copy of the registers of simulated node `(e, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Link<R, P, V> {
    pub out: Option<Label>,
    pub wait: bool,
    pub pps: PpsState,
    pub coin: bool,
    pub role_coin: bool,
    pub role: Role,
    pub engaged: Vec<bool>,
    pub regs: R,
    pub vm: Option<VirtualMsg<P>>,
    pub verdict: Option<V>,
}

/// `links[p][i]`: simulated node of layer `i` on the edge behind port `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineState<R, P, V> {
    pub links: Vec<Vec<Link<R, P, V>>>,
}

/// What an endpoint tells the other about their shared edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OwnPart<P, V> {
    pub out: Option<Label>,
    pub step: Step,
    pub coin: bool,
    pub role_coin: bool,
    pub vm: Option<VirtualMsg<P>>,
    pub verdict: Option<V>,
}

/// What an endpoint knows about one of its other edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relay<P> {
    pub out: Option<Label>,
    pub vm: Option<VirtualMsg<P>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineMsg<P, V> {
    /// One entry per layer.
    pub own: Vec<OwnPart<P, V>>,
    /// `others[k][i]`: the sender's `k`-th other edge, layer `i`.
    pub others: Vec<Vec<Relay<P>>>,
}

/// How the layer outputs of an edge map to its host output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMap {
    Identity,
    /// Layer `i` IN gives color `i + 1`; all layers OUT give `α + 1`.
    CloneColor,
}

/// Simulation of a node transformer on L(G), or on the clone graph of L(G)
/// with `alpha` layers, run by the endpoints of each edge of G. A phase of
/// length φ takes 2φ host rounds.
#[derive(Debug, Clone)]
pub struct LineSim<Ph> {
    name: String,
    phase: Ph,
    inner: LclSpec,
    host: LclSpec,
    potential: PotentialSpec,
    nu: usize,
    alpha: usize,
    map: OutputMap,
}

impl<Ph: NodePhase> LineSim<Ph> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        phase: Ph,
        inner: LclSpec,
        host: LclSpec,
        potential: PotentialSpec,
        nu: usize,
        alpha: usize,
        map: OutputMap,
    ) -> Result<Self, TransformError> {
        if phase.phi() < 2 {
            return Err(TransformError::InvalidPhaseStructure(format!("phase length {} < 2", phase.phi())));
        }
        if alpha == 0 || inner.kind() != Kind::Node || host.kind() != Kind::Edge {
            return Err(TransformError::InvalidPhaseStructure("line simulation needs α ≥ 1, a node-LCL inside and an edge-LCL outside".into()));
        }
        if map == OutputMap::Identity && alpha != 1 {
            return Err(TransformError::InvalidPhaseStructure("identity output map needs a single layer".into()));
        }
        Ok(LineSim { name: name.into(), phase, inner, host, potential, nu, alpha, map })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn phase(&self) -> &Ph {
        &self.phase
    }

    /// Host phase length.
    pub fn host_phi(&self) -> u16 {
        2 * self.phase.phi()
    }

    fn fresh_link(&self) -> Link<Ph::Regs, Ph::Payload, Ph::Verdict> {
        Link {
            out: None,
            wait: false,
            pps: PpsState::hold(self.host_phi()),
            coin: false,
            role_coin: false,
            role: Role::Idle,
            engaged: Vec::new(),
            regs: self.phase.fresh_regs(),
            vm: None,
            verdict: None,
        }
    }

    fn map_output(&self, outs: &[Link<Ph::Regs, Ph::Payload, Ph::Verdict>]) -> Option<Label> {
        match self.map {
            OutputMap::Identity => outs[0].out,
            OutputMap::CloneColor => {
                let mut first_in = None;
                for (i, l) in outs.iter().enumerate() {
                    match l.out {
                        None => return None,
                        Some(lcl_core::IN) if first_in.is_none() => first_in = Some(i),
                        _ => {}
                    }
                }
                Some(Label(first_in.map_or(self.alpha + 1, |i| i + 1) as u16))
            }
        }
    }

    fn random_vm(&self, delta: usize, rng: &mut RngStream) -> Option<VirtualMsg<Ph::Payload>> {
        if rng.coin() {
            return None;
        }
        let phase = match rng.below(3) {
            0 => PhaseField::Nil,
            1 => PhaseField::Announce(random_label(self.inner.alphabet(), rng)),
            _ => PhaseField::Work(self.phase.random_payload(delta, rng)),
        };
        Some(VirtualMsg { hstep: rng.below(self.host_phi() as usize) as u16, age: rng.below(4) as u8, phase })
    }

    fn virtual_delta(&self, delta: usize) -> usize {
        (2 * delta).saturating_sub(2) + self.alpha - 1
    }

    /// Outputs of the simulated neighbors of `(p, i)`, from start-of-round
    /// copies on this side and the partner's report on the other.
    fn neighbor_outs(&self, outs0: &[Vec<Option<Label>>], inbox: &[LineMsg<Ph::Payload, Ph::Verdict>], p: usize, i: usize) -> Multiset {
        let a = self.alpha;
        let clique = (0..a).filter(|&j| j != i).map(|j| outs0[p][j]);
        let near = (0..outs0.len()).filter(|&q| q != p).map(|q| outs0[q][i]);
        let far = inbox[p].others.iter().map(|r| r.get(i).and_then(|r| r.out));
        Multiset::from_labels(self.inner.alphabet(), clique.chain(near).chain(far).flatten())
    }
}

/// The phase field of a message computed exactly two rounds ago at host
/// step `s − 2`.
fn fresh<P>(vm: &Option<VirtualMsg<P>>, s: u16) -> Option<&PhaseField<P>> {
    vm.as_ref().filter(|vm| vm.age == 2 && vm.hstep + 2 == s).map(|vm| &vm.phase)
}

type Links<Ph> = Vec<Vec<Link<<Ph as NodePhase>::Regs, <Ph as NodePhase>::Payload, <Ph as NodePhase>::Verdict>>>;

impl<Ph: NodePhase> Protocol for LineSim<Ph> {
    type State = LineState<Ph::Regs, Ph::Payload, Ph::Verdict>;
    type Msg = LineMsg<Ph::Payload, Ph::Verdict>;

    fn name(&self) -> &str {
        &self.name
    }

    fn kind(&self) -> Kind {
        Kind::Edge
    }

    fn lcl(&self) -> &LclSpec {
        &self.host
    }

    fn params(&self) -> Params {
        let phi = self.phase.phi() as usize;
        Params { nu: self.nu, phi: 2 * phi, locality_radius: self.nu + 2 * phi + 1, strong_offset: self.nu + 2 * phi + 4 }
    }

    fn initial_state(&self, degree: usize) -> Self::State {
        LineState { links: (0..degree).map(|_| (0..self.alpha).map(|_| self.fresh_link()).collect()).collect() }
    }

    fn idle_message(&self) -> Self::Msg {
        let own = OwnPart { out: None, step: Step::Hold, coin: false, role_coin: false, vm: None, verdict: None };
        LineMsg { own: vec![own; self.alpha], others: Vec::new() }
    }

    fn random_message(&self, delta: usize, rng: &mut RngStream) -> Self::Msg {
        let vd = self.virtual_delta(delta);
        let own = (0..self.alpha)
            .map(|_| OwnPart {
                out: random_label(self.inner.alphabet(), rng),
                step: PpsState::random(self.host_phi(), rng).step(),
                coin: rng.coin(),
                role_coin: rng.coin(),
                vm: self.random_vm(vd, rng),
                verdict: if rng.coin() { Some(self.phase.random_verdict(vd, rng)) } else { None },
            })
            .collect();
        let k = rng.below(delta);
        let others = (0..k)
            .map(|_| {
                (0..self.alpha).map(|_| Relay { out: random_label(self.inner.alphabet(), rng), vm: self.random_vm(vd, rng) }).collect()
            })
            .collect();
        LineMsg { own, others }
    }

    fn step(&self, ctx: &mut RoundCtx<'_>, st: &mut Self::State, inbox: &[Self::Msg], outbox: &mut [Self::Msg]) {
        let a = self.alpha;
        let d = inbox.len();
        let phi = self.phase.phi();
        let hphi = self.host_phi();
        let vdelta = self.virtual_delta(ctx.delta());
        let links: &mut Links<Ph> = &mut st.links;
        let outs0: Vec<Vec<Option<Label>>> = links.iter().map(|l| l.iter().map(|x| x.out).collect()).collect();

        for l in links.iter_mut().flatten() {
            if l.role == Role::X {
                l.vm = l.vm.as_ref().map(VirtualMsg::aged);
            }
        }

        // Shared step register, exit coin and roles.
        for p in 0..d {
            for i in 0..a {
                let their = &inbox[p].own[i];
                let l = &mut links[p][i];
                let prev = l.pps;
                if prev.step() != their.step {
                    l.pps = PpsState::hold(hphi);
                    l.role = Role::Idle;
                } else if prev.step().is_hold() {
                    let exit = ctx.forced_sync() || (l.coin ^ their.coin);
                    l.pps = prev.advance_with(exit);
                    if exit {
                        l.role = if ctx.forced_sync() {
                            if ctx.is_lower_end(p) {
                                Role::X
                            } else {
                                Role::Y
                            }
                        } else if l.role_coin != their.role_coin {
                            if l.role_coin {
                                Role::X
                            } else {
                                Role::Y
                            }
                        } else {
                            Role::Idle
                        };
                    }
                } else {
                    l.pps = prev.advance_with(false);
                }
                if l.pps.step().is_hold() {
                    l.role = Role::Idle;
                    if !ctx.forced_sync() {
                        l.coin = ctx.rng(Tag::Pps).coin();
                        l.role_coin = ctx.rng(Tag::Role).coin();
                    }
                }
                if l.role != Role::X {
                    l.vm = None;
                    if l.role == Role::Idle {
                        l.verdict = None;
                    }
                }
                if l.role == Role::Idle {
                    l.wait = false;
                }
            }
        }

        // Detection and commits, both on start-of-round outputs.
        let mut commits = Vec::new();
        for p in 0..d {
            for i in 0..a {
                let l = &links[p][i];
                let consistent = inbox[p].own[i].out == outs0[p][i];
                let m = self.neighbor_outs(&outs0, inbox, p, i);
                let ok = consistent && outs0[p][i].is_none_or(|o| self.inner.holds(o, &m));
                let commit = if l.pps.step() == Step::At(hphi - 1) {
                    let verdict = match l.role {
                        Role::X => l.verdict.clone(),
                        Role::Y => inbox[p].own[i].verdict.clone(),
                        Role::Idle => None,
                    };
                    verdict.and_then(|v| self.phase.resolve(&v, &m))
                } else {
                    None
                };
                commits.push((p, i, ok, commit));
            }
        }
        for (p, i, ok, commit) in commits {
            let l = &mut links[p][i];
            let step = l.pps.step();
            if !ok {
                if l.out.is_some() {
                    l.out = None;
                    ctx.log(p * a + i, Cause::Reset, step, hphi);
                }
                l.wait = true;
            }
            if let Some(o) = commit {
                if l.out.is_none() && !l.wait {
                    l.out = Some(o);
                    ctx.log(p * a + i, Cause::Decision, step, hphi);
                }
            }
        }

        // Simulated steps, run by x at even host steps on messages exactly
        // two rounds old.
        let snapshot: Vec<Vec<Option<VirtualMsg<Ph::Payload>>>> = links.iter().map(|l| l.iter().map(|x| x.vm.clone()).collect()).collect();
        for p in 0..d {
            for i in 0..a {
                let l = &mut links[p][i];
                let s = match l.pps.step() {
                    Step::At(s) if l.role == Role::X && s % 2 == 0 => s,
                    _ => continue,
                };
                if l.out.is_some() || l.wait {
                    l.vm = None;
                    l.verdict = None;
                    continue;
                }
                let j = s / 2;
                if j == 0 {
                    l.regs = self.phase.fresh_regs();
                    l.verdict = None;
                    l.vm = Some(VirtualMsg { hstep: 0, age: 0, phase: PhaseField::Announce(None) });
                    continue;
                }
                let remote = |q: usize, k: usize| inbox[q].own.get(k).and_then(|o| o.vm.as_ref().map(VirtualMsg::aged));
                let mut inputs: Vec<Option<VirtualMsg<Ph::Payload>>> = Vec::new();
                inputs.extend((0..a).filter(|&k| k != i).map(|k| snapshot[p][k].clone().or_else(|| remote(p, k))));
                inputs.extend((0..d).filter(|&q| q != p).map(|q| snapshot[q][i].clone().or_else(|| remote(q, i))));
                inputs.extend(inbox[p].others.iter().map(|r| r.get(i).and_then(|r| r.vm.as_ref().map(VirtualMsg::aged))));
                if j == 1 {
                    l.engaged = inputs.iter().map(|vm| fresh(vm, s) == Some(&PhaseField::Announce(None))).collect();
                }
                l.engaged.resize(inputs.len(), false);
                let received: Vec<Ph::Payload> = inputs
                    .iter()
                    .zip(&l.engaged)
                    .filter(|(_, &e)| e)
                    .filter_map(|(vm, _)| match fresh(vm, s) {
                        Some(PhaseField::Work(x)) => Some(x.clone()),
                        _ => None,
                    })
                    .collect();
                let view = WorkView { delta: vdelta, engaged: l.engaged.iter().filter(|&&e| e).count(), received: &received };
                if j + 1 == phi {
                    l.verdict = Some(self.phase.decide(&view, &l.regs));
                    l.vm = None;
                } else {
                    let payload = self.phase.work(j, &view, &mut l.regs, ctx.edge_rng(p, i, Tag::Phase));
                    l.vm = Some(VirtualMsg { hstep: s, age: 0, phase: payload.map_or(PhaseField::Nil, PhaseField::Work) });
                }
            }
        }

        let published = |q: usize, i: usize| -> Option<VirtualMsg<Ph::Payload>> {
            match links[q][i].role {
                Role::X => links[q][i].vm.clone(),
                Role::Y => inbox[q].own.get(i).and_then(|o| o.vm.as_ref().map(VirtualMsg::aged)),
                Role::Idle => None,
            }
        };
        for (p, m) in outbox.iter_mut().enumerate() {
            m.own = links[p]
                .iter()
                .map(|l| OwnPart {
                    out: l.out,
                    step: l.pps.step(),
                    coin: l.coin,
                    role_coin: l.role_coin,
                    vm: if l.role == Role::X { l.vm.clone() } else { None },
                    verdict: if l.role == Role::X { l.verdict.clone() } else { None },
                })
                .collect();
            m.others = (0..d).filter(|&q| q != p).map(|q| (0..a).map(|i| Relay { out: links[q][i].out, vm: published(q, i) }).collect()).collect();
        }
    }

    fn corrupt(&self, st: &mut Self::State, mask: CorruptMask, degree: usize, delta: usize, rng: &mut RngStream) {
        let vd = self.virtual_delta(delta);
        st.links.resize_with(degree, || (0..self.alpha).map(|_| self.fresh_link()).collect());
        for l in st.links.iter_mut().flatten() {
            if mask.out {
                l.out = random_label(self.inner.alphabet(), rng);
            }
            if mask.step {
                l.pps = PpsState::random(self.host_phi(), rng);
                l.coin = rng.coin();
                l.role_coin = rng.coin();
            }
            if mask.wait {
                l.wait = rng.coin();
            }
            if mask.phase {
                l.role = [Role::Idle, Role::X, Role::Y][rng.below(3)];
                l.engaged = (0..vd).map(|_| rng.coin()).collect();
                l.regs = self.phase.random_regs(vd, rng);
                l.vm = self.random_vm(vd, rng);
                l.verdict = if rng.coin() { Some(self.phase.random_verdict(vd, rng)) } else { None };
            }
        }
    }

    fn reshape(&self, st: &mut Self::State, map: &[Option<usize>]) {
        let old = std::mem::take(&mut st.links);
        st.links = map
            .iter()
            .map(|q| match q {
                Some(q) => old[*q].clone(),
                None => (0..self.alpha).map(|_| self.fresh_link()).collect(),
            })
            .collect();
        for l in st.links.iter_mut().flatten() {
            l.engaged.clear();
        }
    }

    fn out_registers(&self, st: &Self::State, out: &mut Vec<Option<Label>>) {
        out.extend(st.links.iter().flatten().map(|l| l.out));
    }

    fn node_output(&self, _st: &Self::State) -> Option<Label> {
        None
    }

    fn port_output(&self, st: &Self::State, port: usize) -> Option<Label> {
        self.map_output(&st.links[port])
    }

    fn view_graph(&self, host: &Graph) -> Option<Graph> {
        let (lg, _) = line_graph(host);
        Some(clone_graph(&lg, self.alpha).0)
    }

    fn view_config(&self, host: &Graph, _view: &Graph, states: &[Self::State]) -> Option<Configuration> {
        let m = host.edge_count();
        let mut values = vec![None; m * self.alpha];
        for (idx, e) in host.edges().iter().enumerate() {
            let (u, v) = e.endpoints();
            let pu = host.port_to(u, v)?;
            let pv = host.port_to(v, u)?;
            for i in 0..self.alpha {
                let x = states[u].links[pu][i].out;
                if x == states[v].links[pv][i].out {
                    values[i * m + idx] = x;
                }
            }
        }
        Some(Configuration::node(values))
    }

    fn view_lcl(&self) -> &LclSpec {
        &self.inner
    }

    fn potential(&self) -> PotentialSpec {
        self.potential.clone()
    }
}
