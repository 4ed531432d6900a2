"""From laboratory numbers to chi.

A 10 nm interference filter at 1310 nm gives signal photons a coherence time
of about 250 fs. Comparing it with the pump pulse duration fixes r and
therefore chi, without any fitted parameter. The two operating points at the
end are the ones at which chi was measured from TAC histograms.
"""

from fourphoton import chi_closed_form, chi_quadrature, coherence_time_from_filter, operating_point

print("coherence time behind a 10 nm filter at 1310 nm: "
      f"{coherence_time_from_filter(1310.0, 10.0):.1f} fs")

print(f"\n{'pump FWHM (fs)':>15} {'r (sigma)':>10} {'r (fwhm)':>10} {'chi':>8}")
for duration in (50.0, 100.0, 200.0, 500.0, 1000.0, 5000.0):
    sigma = operating_point(duration, 10.0, 1310.0, "sigma-ratio")
    fwhm = operating_point(duration, 10.0, 1310.0, "fwhm-ratio")
    print(f"{duration:15.0f} {sigma.ratio:10.4f} {fwhm.ratio:10.4f} {chi_closed_form(sigma.ratio):8.4f}")

print("\nmeasured operating points")
for r, measured in ((2.5, 0.95), (0.2, 0.3)):
    print(f"  r = {r:<4}  model chi = {chi_closed_form(r):.3f}  "
          f"(quadrature {chi_quadrature(r).chi:.5f})  measured chi = {measured}")
