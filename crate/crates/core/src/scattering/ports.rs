use serde::{Deserialize, Serialize};

/// One of the two waveguides, attached to site 1 or site N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Waveguide {
    W1,
    WN,
}

impl Waveguide {
    pub const BOTH: [Waveguide; 2] = [Waveguide::W1, Waveguide::WN];

    /// 1-based site the waveguide couples to.
    pub fn site(self, n: usize) -> usize {
        match self {
            Waveguide::W1 => 1,
            Waveguide::WN => n,
        }
    }

    pub(crate) fn slot(self) -> usize {
        self as usize
    }
}

/// Input and output waveguide of a one-photon process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PortPair {
    pub input: Waveguide,
    pub output: Waveguide,
}

impl PortPair {
    pub const TRANSMISSION: PortPair = PortPair { input: Waveguide::W1, output: Waveguide::WN };
    pub const REFLECTION: PortPair = PortPair { input: Waveguide::W1, output: Waveguide::W1 };

    pub fn is_reflection(self) -> bool {
        self.input == self.output
    }
}

/// Input waveguide of both photons and the output waveguides of the photons
/// detected at momenta p1 and p2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoPhotonPorts {
    pub input: Waveguide,
    pub first: Waveguide,
    pub second: Waveguide,
}

impl TwoPhotonPorts {
    pub const TRANSMISSION: TwoPhotonPorts =
        TwoPhotonPorts { input: Waveguide::W1, first: Waveguide::WN, second: Waveguide::WN };

    /// The four ordered output combinations for a given input.
    pub fn all_outputs(input: Waveguide) -> [TwoPhotonPorts; 4] {
        let mk = |first, second| TwoPhotonPorts { input, first, second };
        [
            mk(Waveguide::W1, Waveguide::W1),
            mk(Waveguide::W1, Waveguide::WN),
            mk(Waveguide::WN, Waveguide::W1),
            mk(Waveguide::WN, Waveguide::WN),
        ]
    }

    pub fn swapped(self) -> TwoPhotonPorts {
        TwoPhotonPorts { first: self.second, second: self.first, ..self }
    }
}
