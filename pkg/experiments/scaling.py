import time

from qiopa.core import Configuration, DetectorSettings, OpaParams, correlation_report, cutoff_for_gain, oracle_correlations

def time_scaling():
    settings = DetectorSettings.zero()
    for gain in (0.2, 0.4, 0.6, 0.8):
        params = OpaParams(gain)
        for configuration in Configuration:
            start_time = time.time()
            correlation_report(params, configuration, settings, "corrected")
            closed = time.time() - start_time

            start_time = time.time()
            oracle_correlations(params, configuration, settings)
            oracle = time.time() - start_time
            print(
                f"g = {gain} {configuration.value}: cutoff {cutoff_for_gain(gain)}, "
                f"closed form {closed:.2e}s, oracle {oracle:.2e}s"
            )


time_scaling()
