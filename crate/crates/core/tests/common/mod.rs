//! Reference values shared by integration tests. The special-function tables
//! were computed with 50-digit arithmetic.
#![allow(dead_code, clippy::excessive_precision)]

pub const ERFC: &[(f64, f64)] = &[
    (-3.0, 1.9999779095030014146),
    (-1.5, 1.9661051464753107271),
    (-0.5, 1.5204998778130465377),
    (-0.001, 1.0011283787909692364),
    (0.0, 1.0),
    (1e-8, 0.99999998871620832904),
    (0.1, 0.8875370839817151016),
    (0.25, 0.72367360983176306701),
    (0.4769362762044699, 0.49999999999999999602),
    (0.5, 0.47950012218695346232),
    (0.75, 0.2888443663464848684),
    (1.0, 0.15729920705028513066),
    (1.5, 0.033894853524689272933),
    (2.0, 0.0046777349810472658379),
    (2.5, 0.00040695201744495893956),
    (3.0, 0.000022090496998585441373),
    (4.5, 1.9661604415428874763e-10),
    (6.0, 2.1519736712498913117e-17),
    (10.0, 2.088487583762544757e-45),
    (26.0, 5.6631924088561428465e-296),
];

pub const GAMMA_Q: &[(f64, f64, f64)] = &[
    (0.5, 0.1, 0.65472084601857702044),
    (0.5, 2.0, 0.045500263896358414401),
    (1.0, 1.0, 0.3678794411714423216),
    (1.5, 0.3, 0.8964323733419114255),
    (2.0, 5.0, 0.04042768199451280258),
    (2.5, 2.5, 0.41588018699550792028),
    (3.0, 10.0, 0.0027693957155115759437),
    (4.0, 0.5, 0.99824837744370917635),
    (8.0, 8.0, 0.45296080948699448545),
    (10.0, 3.0, 0.99889751186988452026),
    (16.0, 20.0, 0.15651313463974301769),
    (32.0, 30.0, 0.61864298980848384085),
    (64.0, 70.0, 0.22090730754116029992),
    (128.0, 100.0, 0.99600537970596441149),
    (256.0, 256.0, 0.49168852369857039258),
    (512.0, 530.0, 0.21155165540565436888),
    (1024.0, 1000.0, 0.77201627430037852012),
    (4096.0, 4200.0, 0.052977536481072870683),
    (0.75, 40.0, 1.3701874121884644872e-18),
    (3.5, 0.001, 0.99999999999728344833),
];

/// First 100 binary digits of the expansion of π used by the published
/// worked examples.
pub const PI_100: &str = "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";

pub const LONGEST_RUN_128: &str = "11001100000101010110110001001100111000000000001001001101010100010001001111010110100000001101011111001100111001101101100010110010";

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}
