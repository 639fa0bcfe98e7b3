from commands.fit import FitCommand
from commands.lmg_scan import LMGCommand
from commands.mps_report import MPSCommand
from commands.rgflow import RGFlowCommand
from commands.scaling import ScalingCommand
from commands.xxz_scan import XXZCommand
from commands.xy_scan import XYScanCommand

COMMANDS = {
    command.name: command
    for command in (
        XYScanCommand, ScalingCommand, XXZCommand, LMGCommand, RGFlowCommand, MPSCommand, FitCommand,
    )
}
