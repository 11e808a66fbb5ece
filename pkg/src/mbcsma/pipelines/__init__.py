from mbcsma.pipelines.sweep.sweep_pipeline import get_sweep_pipeline


saturation_sweep_config = {
    "name": "saturation-sweep",
    "pipeline": get_sweep_pipeline(),
}

single_packet_sweep_config = {
    "name": "single-packet-sweep",
    "pipeline": get_sweep_pipeline(traffic="SinglePacket"),
}

sim_pipelines = [
    saturation_sweep_config,
    single_packet_sweep_config,
]
