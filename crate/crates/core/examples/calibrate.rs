//! Prints the calibrated defaults derived from the device model.

use spinadc_core::device::{calibrate_k_heat, calibrate_theta_sh, ConversionProtocol, DeviceConfig};
use spinadc_core::SimOptions;

fn main() {
    let dev = DeviceConfig { theta_sh: 0.3, ..DeviceConfig::default() };
    let k = calibrate_k_heat(&dev, 2500.0, 1.0, 1e-12).unwrap();
    println!("k_heat = {k:.17e}");
    let dev = DeviceConfig { k_heat: k, ..dev };
    let theta = calibrate_theta_sh(&dev, &ConversionProtocol::default(), &SimOptions::noiseless(), 20e-6).unwrap();
    println!("theta_sh = {theta:.17e}");
    println!("eta_fit = {:.17e}", dev.eta_fit);
}
