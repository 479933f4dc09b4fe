"""服务层测试包"""
