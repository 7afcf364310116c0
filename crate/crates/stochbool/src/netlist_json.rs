//! Netlist interchange as JSON:
//! `{inputs, constants, gates: [{kind, in, out}], aliases, outputs}`.
//!
//! Signals are dense integers; inputs are `0..inputs`. Multi-bit ports are
//! LSB first.

use anyhow::Context;
use serde::{Deserialize, Serialize};

use stochbool_core::netlist::{Alias, Constant, Gate};
use stochbool_core::{GateKind, Netlist};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetlistJson {
    pub inputs: u32,
    #[serde(default)]
    pub constants: Vec<ConstantJson>,
    pub gates: Vec<GateJson>,
    #[serde(default)]
    pub aliases: Vec<AliasJson>,
    pub outputs: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantJson {
    pub signal: u32,
    pub value: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateJson {
    pub kind: String,
    #[serde(rename = "in")]
    pub inputs: Vec<u32>,
    pub out: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AliasJson {
    pub from: u32,
    pub to: u32,
}

impl From<&Netlist> for NetlistJson {
    fn from(c: &Netlist) -> Self {
        Self {
            inputs: c.input_count() as u32,
            constants: c
                .constants()
                .iter()
                .map(|k| ConstantJson {
                    signal: k.signal,
                    value: k.value,
                })
                .collect(),
            gates: c
                .gates()
                .iter()
                .map(|g| GateJson {
                    kind: g.kind.name().to_owned(),
                    inputs: g.inputs.clone(),
                    out: g.output,
                })
                .collect(),
            aliases: c
                .aliases()
                .iter()
                .map(|a| AliasJson {
                    from: a.from,
                    to: a.to,
                })
                .collect(),
            outputs: c.outputs().to_vec(),
        }
    }
}

impl NetlistJson {
    pub fn to_netlist(&self) -> anyhow::Result<Netlist> {
        let gates = self
            .gates
            .iter()
            .map(|g| {
                let kind: GateKind = g.kind.parse()?;
                Ok(Gate {
                    kind,
                    inputs: g.inputs.clone(),
                    output: g.out,
                })
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        let constants = self
            .constants
            .iter()
            .map(|k| Constant {
                signal: k.signal,
                value: k.value,
            })
            .collect();
        let aliases = self
            .aliases
            .iter()
            .map(|a| Alias {
                from: a.from,
                to: a.to,
            })
            .collect();
        Ok(Netlist::from_parts(
            self.inputs,
            constants,
            gates,
            aliases,
            self.outputs.clone(),
        )?)
    }
}

pub fn to_json_string(c: &Netlist) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(&NetlistJson::from(c))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json_str(s: &str) -> anyhow::Result<Netlist> {
    let parsed: NetlistJson = serde_json::from_str(s).context("malformed netlist JSON")?;
    parsed.to_netlist()
}
