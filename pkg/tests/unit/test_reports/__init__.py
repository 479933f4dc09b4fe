"""报告测试包"""
