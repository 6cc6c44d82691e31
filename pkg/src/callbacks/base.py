'''
Callback hooks around an inline test run, same shape as the training-loop
callbacks they grew out of: one no-op method per event, overridden as needed.
'''

import abc


class Callback(abc.ABC):
    def setup(self, **kwargs):
        """Called before collection starts"""
        pass

    def teardown(self, **kwargs):
        """Called after the run, also when it is aborted"""
        pass

    def on_collection_end(self, **kwargs):
        """Called when all test cases are collected"""
        pass

    def on_case_start(self, **kwargs):
        """Called by the worker about to run a test case"""
        pass

    def on_case_end(self, **kwargs):
        """Called when a test case finished"""
        pass

    def on_run_end(self, **kwargs):
        """Called when the report is complete"""
        pass


class CallbackList(Callback):

    def __init__(self, callbacks):
        self.callbacks = callbacks

    def setup(self, **kwargs):
        """Called before collection starts"""
        for callback in self.callbacks:
            callback.setup(**kwargs)

    def teardown(self, **kwargs):
        """Called after the run, also when it is aborted"""
        for callback in self.callbacks:
            callback.teardown(**kwargs)

    def on_collection_end(self, **kwargs):
        """Called when all test cases are collected"""
        for callback in self.callbacks:
            callback.on_collection_end(**kwargs)

    def on_case_start(self, **kwargs):
        """Called by the worker about to run a test case"""
        for callback in self.callbacks:
            callback.on_case_start(**kwargs)

    def on_case_end(self, **kwargs):
        """Called when a test case finished"""
        for callback in self.callbacks:
            callback.on_case_end(**kwargs)

    def on_run_end(self, **kwargs):
        """Called when the report is complete"""
        for callback in self.callbacks:
            callback.on_run_end(**kwargs)
