//! Stationary (undecimated, "à trous") wavelet transform with orthogonal
//! Daubechies filters and periodic boundary extension.
//!
//! Level `j` filters the previous approximation with the analysis taps
//! dilated by `2^(j-1)`, so every band keeps the input length. Each filter is
//! applied around its energy centroid rather than its first tap; a
//! coefficient at index `n` then describes signal content near sample `n` on
//! every scale, which lets time-domain masks be shared across bands.
//!
//! For orthonormal taps `|H(ω)|² + |G(ω)|² = 2`, so one analysis stage
//! doubles the energy and the inverse stage is the adjoint divided by two.
//! Summed over a full decomposition:
//!
//! ```text
//! ‖s‖² = Σ_j ‖d_j‖² / 2^j + ‖a_J‖² / 2^J
//! ```

use crate::error::{Error, Result};
use crate::signal::Signal;

/// Orthogonal quadrature-mirror filter pair.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilterPair {
    name: String,
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
    lowpass_centre: usize,
    highpass_centre: usize,
}

impl WaveletFilterPair {
    /// Builds the pair from its scaling (lowpass) taps; the wavelet taps
    /// follow from `g[k] = (-1)^k h[N-1-k]`.
    pub fn from_lowpass(name: impl Into<String>, lowpass: Vec<f64>) -> Result<Self> {
        let n = lowpass.len();
        if n == 0 || n % 2 != 0 {
            return Err(Error::invalid(format!(
                "wavelet filter needs an even, non-zero tap count, got {n}"
            )));
        }
        let sum: f64 = lowpass.iter().sum();
        if (sum - std::f64::consts::SQRT_2).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "lowpass taps must sum to sqrt(2), got {sum}"
            )));
        }
        let highpass: Vec<f64> = (0..n)
            .map(|k| {
                let v = lowpass[n - 1 - k];
                if k % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let lowpass_centre = energy_centroid(&lowpass);
        let highpass_centre = energy_centroid(&highpass);
        Ok(Self {
            name: name.into(),
            lowpass,
            highpass,
            lowpass_centre,
            highpass_centre,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    pub fn taps(&self) -> usize {
        self.lowpass.len()
    }

    /// Span in samples of the filter dilated for decomposition level `level`.
    pub fn dilated_support(&self, level: usize) -> usize {
        (self.taps() - 1) * (1usize << (level.max(1) - 1)) + 1
    }
}

fn energy_centroid(taps: &[f64]) -> usize {
    let energy: f64 = taps.iter().map(|t| t * t).sum();
    let moment: f64 = taps.iter().enumerate().map(|(k, t)| k as f64 * t * t).sum();
    (moment / energy).round() as usize
}

/// Orthogonal Daubechies pair with `order` vanishing moments (`2·order` taps).
///
/// Supported orders are 1 (Haar) through 10.
pub fn daubechies_filters(order: usize) -> Result<WaveletFilterPair> {
    let taps: &[f64] = match order {
        1 => &DB1,
        2 => &DB2,
        3 => &DB3,
        4 => &DB4,
        5 => &DB5,
        6 => &DB6,
        7 => &DB7,
        8 => &DB8,
        9 => &DB9,
        10 => &DB10,
        _ => {
            return Err(Error::invalid(format!(
                "unsupported Daubechies order {order} (expected 1..=10)"
            )))
        }
    };
    WaveletFilterPair::from_lowpass(format!("db{order}"), taps.to_vec())
}

/// Detail bands for scales `1..=levels` plus the final approximation, all at
/// the input length.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDecomposition {
    details: Vec<Vec<f64>>,
    approximation: Vec<f64>,
    filter: WaveletFilterPair,
    sample_rate_hz: f64,
}

impl WaveletDecomposition {
    pub fn from_parts(
        details: Vec<Vec<f64>>,
        approximation: Vec<f64>,
        filter: WaveletFilterPair,
        sample_rate_hz: f64,
    ) -> Result<Self> {
        if details.is_empty() {
            return Err(Error::invalid("decomposition needs at least one level"));
        }
        let n = approximation.len();
        if n == 0 {
            return Err(Error::EmptySignal);
        }
        for band in &details {
            if band.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: band.len(),
                });
            }
        }
        if let Some(index) = details
            .iter()
            .chain(std::iter::once(&approximation))
            .flat_map(|b| b.iter())
            .position(|c| !c.is_finite())
        {
            return Err(Error::NonFinite { index });
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::invalid("sample rate must be positive"));
        }
        Ok(Self {
            details,
            approximation,
            filter,
            sample_rate_hz,
        })
    }

    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn original_length(&self) -> usize {
        self.approximation.len()
    }

    /// Detail bands, finest scale first.
    pub fn details(&self) -> &[Vec<f64>] {
        &self.details
    }

    /// Detail band for scale `j` (1-based).
    pub fn detail(&self, j: usize) -> &[f64] {
        &self.details[j - 1]
    }

    pub fn approximation(&self) -> &[f64] {
        &self.approximation
    }

    pub fn filter(&self) -> &WaveletFilterPair {
        &self.filter
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    /// Replaces every detail band with `f(scale, band)`.
    pub fn map_details<F>(mut self, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, &[f64]) -> Result<Vec<f64>>,
    {
        let n = self.original_length();
        for (j, band) in self.details.iter_mut().enumerate() {
            let shrunk = f(j + 1, band)?;
            if shrunk.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: shrunk.len(),
                });
            }
            *band = shrunk;
        }
        Ok(self)
    }

    /// Energy with the redundancy of each band divided out; equals the
    /// input energy for an unmodified decomposition.
    pub fn normalized_energy(&self) -> f64 {
        let band = |b: &[f64]| b.iter().map(|c| c * c).sum::<f64>();
        let details: f64 = self
            .details
            .iter()
            .enumerate()
            .map(|(j, d)| band(d) / (1u64 << (j + 1)) as f64)
            .sum();
        details + band(&self.approximation) / (1u64 << self.levels()) as f64
    }
}

/// Forward transform to `levels` scales.
pub fn swt_forward(
    s: &Signal,
    levels: usize,
    filter: &WaveletFilterPair,
) -> Result<WaveletDecomposition> {
    s.require_non_empty()?;
    if levels == 0 {
        return Err(Error::invalid("levels must be at least 1"));
    }
    if levels > 30 {
        return Err(Error::invalid(format!("{levels} levels is not supported")));
    }
    let support = filter.dilated_support(levels);
    if s.len() < support {
        return Err(Error::invalid(format!(
            "signal of {} samples is shorter than the {support}-sample support of level {levels}",
            s.len()
        )));
    }

    let n = s.len();
    let mut approx = s.samples().to_vec();
    let mut details = Vec::with_capacity(levels);
    let mut scratch = Vec::with_capacity(n + support);
    for level in 1..=levels {
        let dilation = 1usize << (level - 1);
        let mut detail = vec![0.0; n];
        let mut next = vec![0.0; n];
        analysis(
            &approx,
            filter.highpass(),
            filter.highpass_centre,
            dilation,
            &mut scratch,
            &mut detail,
        );
        analysis(
            &approx,
            filter.lowpass(),
            filter.lowpass_centre,
            dilation,
            &mut scratch,
            &mut next,
        );
        details.push(detail);
        approx = next;
    }
    Ok(WaveletDecomposition {
        details,
        approximation: approx,
        filter: filter.clone(),
        sample_rate_hz: s.sample_rate_hz(),
    })
}

/// Inverse transform; exact for an unmodified decomposition and linear in
/// the coefficients.
pub fn swt_inverse(d: &WaveletDecomposition) -> Result<Signal> {
    let n = d.original_length();
    for band in &d.details {
        if band.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: band.len(),
            });
        }
    }
    let filter = &d.filter;
    let mut approx = d.approximation.clone();
    let mut scratch = Vec::with_capacity(n + filter.dilated_support(d.levels()));
    for level in (1..=d.levels()).rev() {
        let dilation = 1usize << (level - 1);
        let mut prev = vec![0.0; n];
        synthesis(
            &approx,
            filter.lowpass(),
            filter.lowpass_centre,
            dilation,
            &mut scratch,
            &mut prev,
        );
        synthesis(
            &d.details[level - 1],
            filter.highpass(),
            filter.highpass_centre,
            dilation,
            &mut scratch,
            &mut prev,
        );
        prev.iter_mut().for_each(|v| *v *= 0.5);
        approx = prev;
    }
    Signal::new(approx, d.sample_rate_hz)
}

/// `out[n] = Σ_k taps[k] · x[(n + dilation·(k − centre)) mod N]`
fn analysis(
    x: &[f64],
    taps: &[f64],
    centre: usize,
    dilation: usize,
    ext: &mut Vec<f64>,
    out: &mut [f64],
) {
    let n = x.len();
    let span = dilation * (taps.len() - 1);
    let lead = (dilation * centre) % n;
    ext.clear();
    ext.extend((0..n + span).map(|i| x[(i + n - lead) % n]));
    for (i, o) in out.iter_mut().enumerate() {
        *o = taps
            .iter()
            .enumerate()
            .map(|(k, t)| t * ext[i + k * dilation])
            .sum();
    }
}

/// Adjoint of [`analysis`], accumulated into `out`:
/// `out[m] += Σ_k taps[k] · y[(m − dilation·(k − centre)) mod N]`
fn synthesis(
    y: &[f64],
    taps: &[f64],
    centre: usize,
    dilation: usize,
    ext: &mut Vec<f64>,
    out: &mut [f64],
) {
    let n = y.len();
    let last = taps.len() - 1;
    let span = dilation * last;
    let lead = (dilation * (last - centre)) % n;
    ext.clear();
    ext.extend((0..n + span).map(|i| y[(i + n - lead) % n]));
    for (m, o) in out.iter_mut().enumerate() {
        *o += taps
            .iter()
            .enumerate()
            .map(|(k, t)| t * ext[m + (last - k) * dilation])
            .sum::<f64>();
    }
}

// Scaling-filter taps normalized to Σh = √2, obtained by spectral
// factorization in extended precision; they agree with the usual published
// tables to the tables' printed accuracy.
#[allow(clippy::excessive_precision)]
mod tables {
    pub(super) const DB1: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2; 2];

    pub(super) const DB2: [f64; 4] = [
        0.48296291314453414337,
        0.83651630373780790558,
        0.22414386804201338103,
        -0.12940952255126038117,
    ];

    pub(super) const DB3: [f64; 6] = [
        0.332670552950082616,
        0.80689150931109257649,
        0.4598775021184915701,
        -0.1350110200102545887,
        -0.085441273882026661693,
        0.035226291885709536603,
    ];

    pub(super) const DB4: [f64; 8] = [
        0.23037781330889650086,
        0.71484657055291564709,
        0.63088076792985890788,
        -0.027983769416859854211,
        -0.18703481171909308408,
        0.030841381835560763627,
        0.032883011666885199735,
        -0.010597401785069032105,
    ];

    pub(super) const DB5: [f64; 10] = [
        0.16010239797419291448,
        0.60382926979718967054,
        0.72430852843777292773,
        0.13842814590132073151,
        -0.24229488706638203186,
        -0.032244869584638374648,
        0.077571493840045713523,
        -0.0062414902127982742742,
        -0.012580751999081999469,
        0.003335725285473771278,
    ];

    pub(super) const DB6: [f64; 12] = [
        0.11154074335010946362,
        0.49462389039845308568,
        0.75113390802109535068,
        0.31525035170919762909,
        -0.22626469396543982008,
        -0.12976686756726193556,
        0.097501605587323049102,
        0.027522865530305728626,
        -0.031582039317486029565,
        0.00055384220116149613925,
        0.0047772575109455106396,
        -0.0010773010853084795649,
    ];

    pub(super) const DB7: [f64; 14] = [
        0.07785205408500917902,
        0.39653931948191730654,
        0.72913209084623511992,
        0.46978228740519312247,
        -0.14390600392856497541,
        -0.22403618499387498264,
        0.071309219266830264751,
        0.080612609151083071913,
        -0.03802993693501441358,
        -0.016574541630666880654,
        0.012550998556099840613,
        0.00042957797292136652113,
        -0.0018016407040474909153,
        0.00035371379997452024845,
    ];

    pub(super) const DB8: [f64; 16] = [
        0.054415842243104009955,
        0.31287159091429997066,
        0.67563073629728980681,
        0.58535468365420671277,
        -0.015829105256349305667,
        -0.28401554296154692652,
        0.00047248457391328277036,
        0.12874742662047845886,
        -0.01736930100180754617,
        -0.044088253930794751507,
        0.013981027917398281649,
        0.0087460940474057767164,
        -0.0048703529934515743104,
        -0.0003917403733769470463,
        0.00067544940645056936637,
        -0.00011747678412476953373,
    ];

    pub(super) const DB9: [f64; 18] = [
        0.038077947363878346589,
        0.24383467461259035373,
        0.6048231236901111119,
        0.65728807805130053808,
        0.13319738582500757619,
        -0.29327378327917490881,
        -0.096840783222976460514,
        0.14854074933810638014,
        0.030725681479333379212,
        -0.067632829061329973676,
        0.00025094711483145195759,
        0.022361662123679097205,
        -0.0047232047577513972779,
        -0.0042815036824634298345,
        0.0018476468830562264766,
        0.00023038576352319596721,
        -0.00025196318894271013697,
        0.000039347320316271599481,
    ];

    pub(super) const DB10: [f64; 20] = [
        0.026670057900555553587,
        0.18817680007769148902,
        0.52720118893172558648,
        0.68845903945360356574,
        0.28117234366057746075,
        -0.24984642432731537942,
        -0.1959462743773770435,
        0.12736934033579326008,
        0.09305736460357235116,
        -0.071394147166397087145,
        -0.029457536821875812858,
        0.03321267405934100174,
        0.0036065535669561696554,
        -0.010733175483330575044,
        0.0013953517470529011658,
        0.0019924052951850561172,
        -0.00068585669495971162656,
        -0.00011646685512928545095,
        0.000093588670320069591334,
        -0.000013264202894521244812,
    ];
}
use tables::*;
