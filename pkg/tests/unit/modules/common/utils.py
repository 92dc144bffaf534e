from __future__ import absolute_import, division, print_function

__metaclass__ = type

import logging

import pytest

from qbattery.module_utils import helper


def set_module_args(**args):
    helper._QBATTERY_ARGS = args


class ExitJson(Exception):
    pass


class FailJson(Exception):
    pass


def exit_json(module, **kwargs):
    if "changed" not in kwargs:
        kwargs["changed"] = False
    if module.warnings:
        kwargs["warnings"] = list(module.warnings)
    raise ExitJson(kwargs)


def fail_json(module, msg, **kwargs):
    kwargs["failed"] = True
    kwargs["msg"] = msg
    raise FailJson(kwargs)


class ModuleTestCase:
    @pytest.fixture(autouse=True)
    def module_mock(self, mocker):
        return mocker.patch.multiple(
            helper.QBatteryModule, exit_json=exit_json, fail_json=fail_json
        )

    @pytest.fixture(autouse=True)
    def reset_module_args(self):
        yield
        helper._QBATTERY_ARGS = None
        logger = logging.getLogger("qbattery")
        logger.handlers = []
        logger.setLevel(logging.NOTSET)

    def _run_module(self, module_args):
        set_module_args(**module_args)

        with pytest.raises(ExitJson) as ex:
            self.module.main()
        return ex.value.args[0]

    def _run_module_fail(self, module_args):
        set_module_args(**module_args)

        with pytest.raises(FailJson) as ex:
            self.module.main()
        return ex.value.args[0]
